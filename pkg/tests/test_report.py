import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsvd_diag.bounds import GapAssumptionError, RankAssumptionError, ReferenceSvd
from rsvd_diag.norms import NormSpec
from rsvd_diag.report import CSV_COLUMNS, QUANTITIES, BoundReport, build_report, check_rows
from rsvd_diag.sketch import gaussian_guess

from .oracles import random_orthonormal


def _small_problem(seed, m=30, n=20, k=3, ell=6, decay=0.7):
    gen = np.random.default_rng(seed)
    s = decay ** np.arange(n)
    A = (random_orthonormal(gen, m, n) * s) @ random_orthonormal(gen, n, n).T
    return A, ReferenceSvd.from_matrix(A, k), gen.standard_normal((n, ell))


def test_add_rejects_unknown_quantity():
    rep = BoundReport("A", 2, 1, 0, 0)
    with pytest.raises(KeyError):
        rep.add("made_up", 0.0, 1.0)


def test_slack_direction():
    rep = BoundReport("A", 2, 1, 0, 0)
    rep.add("sin_theta", 0.3, 0.2, j=1)
    rep.add("sigma_lower", 0.3, 0.2, j=1)
    assert rep.entries[0].slack == pytest.approx(-0.1)
    assert rep.entries[1].slack == pytest.approx(0.1)
    assert [e.quantity for e in rep.violations()] == ["sin_theta"]


def test_vacuous_flag():
    rep = BoundReport("A", 2, 1, 0, 0)
    rep.add("sin_theta", 0.3, 1.7, j=1)
    rep.add("tan_theta", 0.3, 1.7, j=1)
    assert [e.quantity for e in rep.vacuous()] == ["sin_theta"]
    assert rep.to_dict()["exceeds_one"] == [{"quantity": "sin_theta", "j": 1, "norm_spec": ""}]


def test_rows_shape_and_roundtrip():
    A, ref, Omega = _small_problem(0)
    rep = build_report(A, ref, Omega, 1, matrix="toy", seed=7)
    rows = list(rep.rows())
    assert rows and all(tuple(r) == CSV_COLUMNS for r in rows)
    for row, e in zip(rows, rep.entries):
        assert float(row["measured"]) == e.measured and float(row["bound"]) == e.bound
    assert check_rows(rows) == []
    json.dumps(rep.to_dict())


def test_check_rows_flags_violation_and_nan():
    base = dict(matrix="A", k=2, rho=1, q=0, seed=0, j=1, norm_spec="")
    rows = [
        {**base, "quantity": "sin_theta", "measured": "0.5", "bound": "0.4"},
        {**base, "quantity": "sigma_lower", "measured": "0.5", "bound": "0.4"},
        {**base, "quantity": "triplet", "measured": "nan", "bound": "0.4"},
        {**base, "quantity": "scaled_angle", "measured": "0.5", "bound": "0.4"},
    ]
    assert [r["quantity"] for r in check_rows(rows)] == ["sin_theta", "triplet"]
    assert [r["quantity"] for r in check_rows(rows, kind="diagnostic")] == ["scaled_angle"]


def test_report_covers_every_structural_quantity():
    A, ref, Omega = _small_problem(1)
    rep = build_report(A, ref, Omega, 0, specs=[NormSpec.spectral(), NormSpec.frobenius(), NormSpec.kyfan(5)])
    present = {e.quantity for e in rep.entries}
    expected = {name for name, qty in QUANTITIES.items() if qty.kind != "statistical"}
    assert present == expected


def test_report_assumption_errors():
    A = np.diag([3.0, 2.0, 2.0, 1.0, 0.5])
    with pytest.raises(GapAssumptionError):
        build_report(A, ReferenceSvd.from_matrix(A, 2), np.eye(5)[:, :3], 0)
    ref = ReferenceSvd.from_matrix(A, 1)
    with pytest.raises(RankAssumptionError):
        build_report(A, ref, np.eye(5)[:, 1:3], 0)


def test_degenerate_triplets_are_noted(named):
    A, ref = named("DecayFast", 25)
    rep = build_report(A, ref, gaussian_guess(300, 45, 0), 2)
    js = [e.j for e in rep.select("triplet")]
    if len(js) < 25:
        assert any("zero separation" in n for n in rep.notes)
    assert rep.violations() == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2), st.sampled_from(["practical", "idealized"]), st.floats(0.3, 0.9))
def test_structural_bounds_hold_on_random_problems(seed, q, variant, decay):
    A, ref, Omega = _small_problem(seed, decay=decay)
    rep = build_report(A, ref, Omega, q, variant=variant)
    assert rep.violations(slack=1e-8) == []
