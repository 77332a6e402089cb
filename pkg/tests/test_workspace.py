from __future__ import annotations

import copy
import json

import pytest

from dgmonad.corpus import (
    example_bousfield,
    example_dual_numbers,
    example_field_extension,
    example_group_action,
    example_swap_action,
)
from dgmonad.fields import QQ
from dgmonad.workspace import WorkspaceError, bundle_workspace, emit, ingest, ingest_data, ingest_text

from helpers import F2, F3

BUNDLES = [
    lambda: example_dual_numbers(F2),
    lambda: example_dual_numbers(QQ),
    lambda: example_field_extension(2, 2),
    lambda: example_field_extension(3, 1),
    lambda: example_group_action("Z2", F3),
    lambda: example_group_action("S3", F2),
    lambda: example_swap_action(F2),
    lambda: example_bousfield(F3),
]


@pytest.mark.parametrize("make", BUNDLES)
def test_emit_is_byte_stable(make):
    spec, exp = bundle_workspace(make())
    text = emit(spec)
    ws = ingest_text(text)
    assert ws.emit() == text
    assert emit(ingest_text(ws.emit()).spec) == text
    assert exp


def _dual_spec():
    spec, _ = bundle_workspace(example_dual_numbers(F3))
    return spec


def _error_of(spec) -> WorkspaceError:
    text = emit(spec)
    with pytest.raises(WorkspaceError) as info:
        ingest_text(text)
    return info.value, text


def test_malformed_scalar_has_path_and_line():
    spec = _dual_spec()
    spec["monads"]["M"]["algebra"]["mult"][0][0][0] = "1/0"
    err, text = _error_of(spec)
    assert err.kind == "validation"
    assert err.path == "monads.M.algebra.mult[0][0][0]"
    assert '"1/0"' in text.splitlines()[err.line - 1]
    assert err.to_json()["line"] == err.line


def test_non_associative_algebra_rejected():
    spec = _dual_spec()
    spec["monads"]["M"]["algebra"]["mult"][1][1] = ["1", "0"]  # X² = 1 is fine
    ingest_text(emit(spec))
    spec["monads"]["M"]["algebra"]["mult"][1][0] = ["0", "0"]  # X·1 = 0 breaks the unit
    err, _ = _error_of(spec)
    assert err.path.startswith("monads.M.algebra")


@pytest.mark.parametrize("edit,path", [
    (lambda s: s.update(extra={}), "extra"),
    (lambda s: s.update(version=2), "version"),
    (lambda s: s.pop("field"), ""),
    (lambda s: s["categories"]["C"].update(grading="Z3"), "categories.C.grading"),
    (lambda s: s["monads"]["M"].update(category="nope"), "monads.M.category"),
    (lambda s: s["modules"]["B"].update(action=["1"]), "modules.B.action"),
])
def test_validation_errors(edit, path):
    spec = copy.deepcopy(_dual_spec())
    edit(spec)
    err, _ = _error_of(spec)
    assert err.kind == "validation"
    assert err.path == path


def test_differential_must_square_to_zero():
    spec = _dual_spec()
    objs = spec["categories"]["C"]["objects"]
    B = next(o for o in objs if o["name"] == "B")
    B["d"]["0"] = [["1", "0"], ["0", "1"]]
    err, _ = _error_of(spec)
    assert "d∘d" in err.message


def test_syntax_and_io_errors(tmp_path):
    with pytest.raises(WorkspaceError) as info:
        ingest_text('{"version": 1,\n "field": }')
    assert info.value.kind == "syntax" and info.value.line == 2
    with pytest.raises(WorkspaceError) as info:
        ingest(tmp_path / "missing.json")
    assert info.value.kind == "io"
    with pytest.raises(WorkspaceError):
        ingest_data([])


def test_scalars_must_be_strings():
    spec = json.loads(emit(_dual_spec()))
    spec["modules"]["B"]["action"][0] = 1.5
    err, _ = _error_of(spec)
    assert err.path == "modules.B.action[0]"
