from __future__ import annotations

import json

import pytest

from conftest import rect
from vos_tracking.utils.errors import InputFormatError
from vos_tracking.utils.track_io import OutputTrack, TrackOutput, load_tracks, parse_tracks, write_tracks


def _doc():
    return {
        "height": 2,
        "width": 3,
        "num_frames": 2,
        "tracks": [
            {"track_id": 1, "saliency": 2.0, "segments": {"0": [0, 2, 4], "1": [2, 2, 2]}},
            {"track_id": 2, "saliency": 1.0, "segments": {"0": [4, 2]}},
        ],
    }


def test_parse_and_serialise():
    out = parse_tracks(_doc())
    assert out.tracks[0].frames == [0, 1]
    assert out.masks_at(0) == {1: out.tracks[0].segments[0], 2: out.tracks[1].segments[0]}
    assert out.to_json() == _doc()


def test_write_is_sorted_and_reloadable(tmp_path):
    out = TrackOutput(2, 3, 2, (OutputTrack(1, 0.5, {1: rect(2, 3, (0, 1), (0, 3))}),))
    path = write_tracks(tmp_path / "t.json", out)
    text = path.read_text()
    assert text.endswith("\n")
    assert text.index('"height"') < text.index('"num_frames"') < text.index('"tracks"')
    assert load_tracks(path) == out


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d["tracks"][1]["segments"].update({"0": [1, 2, 3]}), "overlap"),
        (lambda d: d["tracks"][1].update(track_id=1), "Duplicate"),
        (lambda d: d["tracks"][1]["segments"].update({"2": [6]}), "outside"),
        (lambda d: d["tracks"][0].update(track_id=0), "tracks\\[0\\].track_id"),
        (lambda d: d["tracks"][0]["segments"].update({"x": [6]}), "segments"),
        (lambda d: d["tracks"][0]["segments"].update({"1": [5]}), "tracks\\[0\\].segments.1"),
    ],
)
def test_invalid_documents(mutate, message):
    doc = _doc()
    mutate(doc)
    with pytest.raises(InputFormatError, match=message):
        parse_tracks(doc)


def test_load_names_file(tmp_path):
    doc = _doc()
    doc["tracks"][0]["saliency"] = -1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InputFormatError, match="bad.json"):
        load_tracks(path)
