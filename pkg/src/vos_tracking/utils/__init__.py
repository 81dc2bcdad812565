from .config_loader import TrackingConfig, load_config
from .errors import ConfigError, InputFormatError, TrackingError
from .io import atomic_write_text, read_json, sha256_file, write_json
