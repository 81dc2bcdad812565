from .flow import FlowField
from .masks import Mask, area, clip_stack, decode, encode, iou, iou_matrix, warp
