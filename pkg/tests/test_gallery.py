import runpy
from pathlib import Path

import pytest

from dualgap.gallery import (
    GALLERIES,
    SUBLINEAR_FLAGS,
    UnknownGallery,
    run_gallery,
    sublinear_flags,
)
from dualgap.generators import polyhedral_family, sublinear_family
from dualgap.report import PASS


def test_parabola_gallery_rows():
    rep = run_gallery("example33")
    assert [r.query[:2] for r in rep.rows] == ["a_", "b_", "c_", "d_", "e_", "f_"]
    assert all(r.verdict == PASS for r in rep.rows)


@pytest.mark.parametrize("seed", [0, 1])
def test_polyhedral_demo_small(seed):
    rep = run_gallery("polyhedral-demo", seed, 4)
    assert rep.all_pass and len(rep.rows) == 5


def test_sublinear_demo_flags():
    rep = run_gallery("sublinear-demo", 0, 3)
    assert rep.all_pass
    assert all("flags=" + "T" * len(SUBLINEAR_FLAGS) in r.value for r in rep.rows)


def test_sublinear_flags_direct():
    d, polys, fs = sublinear_family(5, 1)[0]
    assert set(sublinear_flags(d, polys, fs)) == set(SUBLINEAR_FLAGS)


def test_cq_matrix_ends_with_separating_row():
    rep = run_gallery("cq-matrix")
    assert rep.rows[-1].query == "separating_instance" and rep.rows[-1].value == "example33.json"


def test_family_is_seeded():
    a, b = polyhedral_family(3, 5), polyhedral_family(3, 5)
    assert all(f.equals(g) for ma, mb in zip(a, b) for f, g in zip(ma.functions, mb.functions))
    assert all(all(f.in_domain(m.points[0]) for f in m.functions) for m in a)


def test_unknown_gallery():
    with pytest.raises(UnknownGallery):
        run_gallery("nope")
    assert len(GALLERIES) == 4


@pytest.mark.parametrize("script", sorted(p.name for p in (Path(__file__).parent.parent / "demos").glob("*.py")))
def test_demo_runs(script, capsys):
    runpy.run_path(str(Path(__file__).parent.parent / "demos" / script), run_name="__main__")
    assert capsys.readouterr().out
