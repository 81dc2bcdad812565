from __future__ import annotations

import json

import numpy as np
import pytest

from vos_tracking.ingestion.proposal_file import load_proposals, parse_proposals, proposals_to_json
from vos_tracking.utils.errors import InputFormatError, MaskFormatError


def _doc(**overrides):
    doc = {
        "height": 2,
        "width": 2,
        "num_frames": 3,
        "frames": [
            {
                "frame": 0,
                "proposals": [
                    {"id": 5, "score": 0.9, "rle": [0, 2, 2], "embedding": [1.0, 0.0]},
                    {"id": 6, "score": 0.4, "rle": [2, 2], "embedding": [0.0, 1.0]},
                ],
            },
            {"frame": 2, "proposals": [{"id": 7, "score": 1.0, "rle": [4]}]},
        ],
    }
    doc.update(overrides)
    return doc


def test_parse_fills_missing_frames():
    seq = parse_proposals(_doc())
    assert seq.num_frames == 3
    assert [len(fs) for fs in seq.frames] == [2, 0, 1]
    assert seq.embedding_dim == 2
    p = seq.frames[0].proposals[0]
    assert (p.frame, p.source_id, p.score) == (0, 5, 0.9)
    np.testing.assert_array_equal(p.embedding, [1.0, 0.0])
    assert seq.frames[2].proposals[0].embedding is None


def test_schema_error_names_location(tmp_path):
    doc = _doc()
    doc["frames"][0]["proposals"][1]["score"] = 1.5
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InputFormatError) as err:
        load_proposals(path)
    assert "frames[0].proposals[1].score" in str(err.value)
    assert str(path) in str(err.value)


def test_zero_score_rejected():
    doc = _doc()
    doc["frames"][0]["proposals"][0]["score"] = 0
    with pytest.raises(InputFormatError):
        parse_proposals(doc)


def test_bad_rle_is_mask_format_error():
    doc = _doc()
    doc["frames"][1]["proposals"][0]["rle"] = [3]
    with pytest.raises(MaskFormatError) as err:
        parse_proposals(doc)
    assert err.value.location == "frames[1].proposals[0].rle"


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d["frames"][1].update(frame=0), "listed twice"),
        (lambda d: d["frames"][1].update(frame=3), "outside"),
        (lambda d: d["frames"][0]["proposals"][1].update(id=5), "duplicate proposal id"),
        (lambda d: d["frames"][0]["proposals"][1].update(embedding=[1.0]), "embedding length"),
    ],
)
def test_semantic_errors(mutate, message):
    doc = _doc()
    mutate(doc)
    with pytest.raises(InputFormatError, match=message):
        parse_proposals(doc)


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"height": 2,\n "width": }')
    with pytest.raises(InputFormatError, match="line 2"):
        load_proposals(path)


def test_missing_file(tmp_path):
    with pytest.raises(InputFormatError, match="file not found"):
        load_proposals(tmp_path / "nope.json")


def test_to_json_round_trip():
    doc = _doc()
    again = proposals_to_json(parse_proposals(doc))
    assert again == doc


def test_non_canonical_rle_is_written_back_canonical():
    doc = _doc()
    doc["frames"][0]["proposals"][1]["rle"] = [2, 0, 0, 2]
    seq = parse_proposals(doc)
    assert seq.frames[0].proposals[1].mask.runs == (2, 2)
    assert proposals_to_json(seq)["frames"][0]["proposals"][1]["rle"] == [2, 2]
