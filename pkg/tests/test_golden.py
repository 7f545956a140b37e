import json

import pytest

from src.golden import GOLDEN_EXAMPLES, GoldenExample, RowStatus, all_passed, verify_examples


@pytest.fixture(scope="module")
def rows():
    return verify_examples()


def test_every_example_passes(rows):
    failed = [(row.example, row.check, row.actual) for row in rows if row.status == RowStatus.FAIL]
    assert failed == []
    assert all_passed(rows)


def test_every_example_is_checked(rows):
    assert {row.example for row in rows} == set(GOLDEN_EXAMPLES)


def test_discrepancy_rows_carry_published_values(rows):
    flagged = {(row.example, row.check): row for row in rows if row.status == RowStatus.DISCREPANCY}
    assert ("normalized-diagonal", "perturbed dual A") in flagged
    assert ("split-axis", "printed dual family (1,0),(a,1-b),(-a,1-b) is dual") in flagged
    assert ("mercedes", "F is its own dual") in flagged
    row = flagged[("normalized-diagonal", "perturbed dual A")]
    assert row.published == 1.0162313
    assert row.actual == pytest.approx(1.04)
    for row in flagged.values():
        assert row.published is not None
        assert row.note


def test_rows_serialize(rows):
    data = json.loads(json.dumps([row.to_dict() for row in rows]))
    statuses = {row["status"] for row in data}
    assert statuses <= {"pass", "paper-discrepancy"}


def test_perturbed_fixture_fails():
    broken = GoldenExample(
        name="split-axis",
        title="split axis with a full second vector",
        vectors=[(1, 0), (0, 1), (0, 0.5)],
        probabilities=[0, 1 / 2, 1 / 2],
    )
    rows = verify_examples({"split-axis": broken})
    assert not all_passed(rows)
    failed = {row.check for row in rows if row.status == RowStatus.FAIL}
    assert "frame bounds" in failed


def test_frame_files_match_examples(frames_dir):
    for name in GOLDEN_EXAMPLES:
        path = frames_dir / f"{name.replace('-', '_')}.json"
        data = json.loads(path.read_text())
        assert len(data["vectors"]) == len(GOLDEN_EXAMPLES[name].vectors)
        assert data["probabilities"] == pytest.approx(GOLDEN_EXAMPLES[name].probabilities)
