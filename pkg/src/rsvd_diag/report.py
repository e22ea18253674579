"""Pair every bound with the measured quantity it must dominate."""
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import bounds as B
from .angles import canonical_angles, vector_subspace_angle, vector_vector_angle
from .linalg import singular_values
from .norms import NormSpec, gauge
from .sketch import PRNG_VERSION, rand_svd

CSV_COLUMNS = ("matrix", "k", "rho", "q", "seed", "quantity", "j", "measured", "bound", "norm_spec")
MASTER_SLACK = 1e-8


class Quantity(NamedTuple):
    direction: str  # "upper": bound >= measured; "lower": bound <= measured
    kind: str  # "structural" or "statistical"
    sine_like: bool  # a sine-valued measurement, so bounds above 1 are vacuous
    description: str


QUANTITIES = {
    "sin_theta": Quantity("upper", "structural", True, "sin angle(U_k, U_hat), per index"),
    "sin_nu": Quantity("upper", "structural", True, "sin angle(V_k, V_hat), per index"),
    "tan_theta": Quantity("upper", "structural", False, "tan angle(U_k, U_hat), per index"),
    "tan_nu": Quantity("upper", "structural", False, "tan angle(V_k, V_hat), per index"),
    "angle_norm_u": Quantity("upper", "structural", False, "|||sin angle(U_k, U_hat)|||"),
    "angle_norm_v": Quantity("upper", "structural", False, "|||sin angle(V_k, V_hat)|||"),
    "theta_monotone": Quantity("upper", "structural", True, "sin theta_j <= sin theta'_j"),
    "nu_monotone": Quantity("upper", "structural", True, "sin nu_j <= sin nu'_j"),
    "scaled_angle": Quantity("upper", "diagnostic", True, "max(sin theta'_j, sin nu'_j) vs scaled index-k value"),
    "residual_angle": Quantity("upper", "structural", True, "max(sin theta'_j, sin nu'_j) vs residual-ratio bound"),
    "extraction_norm": Quantity("upper", "structural", False, "max |||sin angle||| after truncation to rank k"),
    "extraction_angle": Quantity("upper", "structural", True, "max(sin theta'_j, sin nu'_j)"),
    "vec_u_subspace": Quantity("upper", "structural", True, "sin angle(u_j, U_hat)"),
    "vec_v_subspace": Quantity("upper", "structural", True, "sin angle(v_j, V_hat)"),
    "triplet": Quantity("upper", "structural", True, "max(sin angle(u_j, u_hat_j), sin angle(v_j, v_hat_j))"),
    "lowrank_full": Quantity("upper", "structural", False, "|||(I - QQ^T) A|||"),
    "lowrank_rank_k": Quantity("upper", "structural", False, "|||(I - QQ^T) A_k|||"),
    "lowrank_truncated": Quantity("upper", "structural", False, "|||A - Q B_k|||"),
    "lowrank_schatten": Quantity("upper", "structural", False, "|||(I - QQ^T) A|||_p, p >= 2"),
    "sigma_upper": Quantity("upper", "structural", False, "sigma_hat_j <= sigma_j"),
    "sigma_lower": Quantity("lower", "structural", False, "sigma_hat_j >= lower bound"),
    "hw_uin": Quantity("upper", "structural", False, "|||Sigma - Sigma'|||"),
    "hw_schatten": Quantity("upper", "structural", False, "|||Sigma - Sigma'|||_p, p >= 2"),
    "eckart_young": Quantity("lower", "structural", False, "|||(I - QQ^T) A||| >= tail beyond ell"),
    "prob_tail_fraction": Quantity("upper", "statistical", False, "fraction of seeds above the tail bound"),
    "prob_expectation": Quantity("upper", "statistical", True, "mean sin theta_j over seeds"),
}


@dataclass
class BoundEntry:
    quantity: str
    j: int | None
    measured: float
    bound: float
    norm_spec: str = ""

    @property
    def slack(self):
        """Margin by which the bound holds; negative means violated."""
        if QUANTITIES[self.quantity].direction == "upper":
            return self.bound - self.measured
        return self.measured - self.bound


@dataclass
class BoundReport:
    matrix: str
    k: int
    rho: int
    q: int
    seed: int | None
    variant: str = "practical"
    leverage: float = float("nan")
    gammas: list = field(default_factory=list)
    sigma: list = field(default_factory=list)
    sigma_hat: list = field(default_factory=list)
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, quantity, measured, bound, j=None, norm_spec=""):
        if quantity not in QUANTITIES:
            raise KeyError(quantity)
        self.entries.append(BoundEntry(quantity, j, float(measured), float(bound), str(norm_spec)))

    def add_series(self, quantity, measured, bound):
        for j, (m, b) in enumerate(zip(measured, bound), start=1):
            self.add(quantity, m, b, j=j)

    def select(self, quantity, norm_spec=None):
        return [
            e
            for e in self.entries
            if e.quantity == quantity and (norm_spec is None or e.norm_spec == str(norm_spec))
        ]

    def series(self, quantity):
        """``(measured, bound)`` arrays of a per-index quantity ordered by j."""
        es = sorted(self.select(quantity), key=lambda e: e.j)
        return np.array([e.measured for e in es]), np.array([e.bound for e in es])

    def violations(self, slack=MASTER_SLACK, kind="structural"):
        return [e for e in self.entries if QUANTITIES[e.quantity].kind == kind and e.slack < -slack]

    def vacuous(self):
        """Sine-type entries whose bound exceeds one (reported unclamped)."""
        return [e for e in self.entries if QUANTITIES[e.quantity].sine_like and e.bound > 1.0]

    def rows(self):
        for e in self.entries:
            yield {
                "matrix": self.matrix,
                "k": self.k,
                "rho": self.rho,
                "q": self.q,
                "seed": "" if self.seed is None else self.seed,
                "quantity": e.quantity,
                "j": "" if e.j is None else e.j,
                "measured": repr(e.measured),
                "bound": repr(e.bound),
                "norm_spec": e.norm_spec,
            }

    def to_dict(self):
        return {
            "matrix": self.matrix,
            "k": self.k,
            "rho": self.rho,
            "q": self.q,
            "seed": self.seed,
            "variant": self.variant,
            "prng": PRNG_VERSION,
            "leverage": self.leverage,
            "gammas": list(self.gammas),
            "sigma": list(self.sigma),
            "sigma_hat": list(self.sigma_hat),
            "entries": [
                {"quantity": e.quantity, "j": e.j, "measured": e.measured, "bound": e.bound, "norm_spec": e.norm_spec}
                for e in self.entries
            ],
            "exceeds_one": [{"quantity": e.quantity, "j": e.j, "norm_spec": e.norm_spec} for e in self.vacuous()],
            "notes": list(self.notes),
        }


def _padded(sv, size):
    sv = np.asarray(sv, dtype=np.float64)
    if sv.size >= size:
        return sv
    return np.concatenate([sv, np.zeros(size - sv.size)])


def _norm(sv, spec):
    # Ky-Fan norms of matrices with fewer singular values than k pad with zeros
    if spec.kind == "kyfan":
        sv = _padded(sv, spec.k)
    return gauge(sv, spec)


DEFAULT_SPECS = tuple(NormSpec.parse(s) for s in ("spectral", "frobenius", "schatten:1", "schatten:4", "kyfan:5"))


def build_report(A, ref, Omega, q, *, variant="practical", specs=DEFAULT_SPECS, matrix="A", seed=None, approx=None):
    """Run subspace iteration and evaluate every structural bound against truth.

    ``ref`` must be split at the target rank k; ``Omega`` has ``ell = k + rho``
    columns. Raises :class:`~rsvd_diag.bounds.AssumptionError` when the
    rank or gap assumptions fail.
    """
    k = ref.k
    ell = Omega.shape[1]
    ref.require_gap()
    split = B.split_omega(ref, Omega)
    if approx is None:
        approx = rand_svd(A, Omega, q, variant)
    gammas = B.singular_ratios(ref)
    w = split.leverage
    rep = BoundReport(
        matrix=matrix,
        k=k,
        rho=ell - k,
        q=q,
        seed=seed,
        variant=variant,
        leverage=w,
        gammas=gammas.tolist(),
        sigma=ref.s[:ell].tolist(),
        sigma_hat=approx.sigma_hat.tolist(),
    )
    U_hat, V_hat, s_hat = approx.U_hat, approx.V_hat, approx.sigma_hat
    U_k, V_k = ref.U_k, ref.V_k
    r = ref.s.size

    # full-dimensional angles
    th = canonical_angles(U_hat, U_k)
    nu = canonical_angles(V_hat, V_k)
    ab = B.angle_bounds(gammas, q, w)
    rep.add_series("sin_theta", th.sines, ab.sin_theta)
    rep.add_series("sin_nu", nu.sines, ab.sin_nu)
    rep.add_series("tan_theta", th.tangents, ab.tan_theta)
    rep.add_series("tan_nu", nu.tangents, ab.tan_nu)

    # truncated (extracted) angles
    U_hat_k, V_hat_k = U_hat[:, :k], V_hat[:, :k]
    thp = canonical_angles(U_hat_k, U_k)
    nup = canonical_angles(V_hat_k, V_k)
    rep.add_series("theta_monotone", th.sines, thp.sines)
    rep.add_series("nu_monotone", nu.sines, nup.sines)
    s_hat_next = float(s_hat[k]) if s_hat.size > k else 0.0
    ext_measured = np.maximum(thp.sines, nup.sines)
    Q = approx.Q
    residual = A - Q @ (Q.T @ A)
    # U_hat_k lies in range(Q), so the left projector in E12 is absorbed
    e12 = singular_values(residual @ V_k)[0]
    M = U_k.T @ residual
    e21 = singular_values(M - (M @ V_hat_k) @ V_hat_k.T)[0]
    try:
        rep.add_series("scaled_angle", ext_measured, B.scaled_angle_bound(ref, thp.sines, nup.sines, s_hat_next))
        rep.add_series("residual_angle", ext_measured, B.residual_angle_bound(ref, e12, e21, s_hat_next))
    except B.GapAssumptionError as exc:
        rep.notes.append(f"scaled_angle skipped: {exc}")
    rep.add_series("extraction_angle", ext_measured, B.extraction_bounds(ref, q, w, NormSpec.spectral()).per_index)

    # individual singular vectors
    vu = [vector_subspace_angle(U_k[:, j], U_hat) for j in range(k)]
    vv = [vector_subspace_angle(V_k[:, j], V_hat) for j in range(k)]
    trip = [
        max(vector_vector_angle(U_k[:, j], U_hat[:, j]), vector_vector_angle(V_k[:, j], V_hat[:, j]))
        for j in range(k)
    ]
    svb = B.single_vector_bounds(ref, q, split, s_hat, strict=False)
    rep.add_series("vec_u_subspace", vu, svb.u_subspace)
    rep.add_series("vec_v_subspace", vv, svb.v_subspace)
    degenerate = []
    for j in range(k):
        if np.isnan(svb.triplet[j]):
            degenerate.append(j + 1)
        else:
            rep.add("triplet", trip[j], svb.triplet[j], j=j + 1)
    if degenerate:
        rep.notes.append(f"triplet bound undefined (zero separation) at j={degenerate}")

    # singular values
    svb2 = B.singular_value_bounds(ref, q, w)
    rep.add_series("sigma_upper", s_hat[:k], svb2.upper)
    rep.add_series("sigma_lower", s_hat[:k], svb2.lower)

    # residual spectra used by every norm-level quantity
    res_full = singular_values(residual)
    res_rank_k = singular_values((U_k - Q @ (Q.T @ U_k)) * ref.s_k)
    res_trunc = singular_values(A - U_hat_k @ (U_hat_k.T @ A))
    hw_measured = B.singular_value_error(ref.s, s_hat)
    tail = ref.s[ell:] if ell < r else np.zeros(1)

    for spec in specs:
        tag = str(spec)
        u_side, v_side = B.angle_norm_bounds(ref, q, w, spec)
        rep.add("angle_norm_u", _norm(th.sines, spec), u_side, norm_spec=tag)
        rep.add("angle_norm_v", _norm(nu.sines, spec), v_side, norm_spec=tag)
        ext = B.extraction_bounds(ref, q, w, spec)
        rep.add("extraction_norm", max(_norm(thp.sines, spec), _norm(nup.sines, spec)), ext.norm_bound, norm_spec=tag)
        lr = B.lowrank_bounds(ref, q, split, spec)
        full_err = _norm(res_full, spec)
        rep.add("lowrank_full", full_err, lr.full, norm_spec=tag)
        rep.add("lowrank_rank_k", _norm(res_rank_k, spec), lr.rank_k, norm_spec=tag)
        rep.add("lowrank_truncated", _norm(res_trunc, spec), lr.truncated, norm_spec=tag)
        if lr.schatten is not None:
            rep.add("lowrank_schatten", full_err, lr.schatten, norm_spec=tag)
        hw_uin, hw_sch = B.hoffman_wielandt_bounds(ref, q, split, spec)
        hw_err = _norm(hw_measured, spec)
        rep.add("hw_uin", hw_err, hw_uin, norm_spec=tag)
        if hw_sch is not None:
            rep.add("hw_schatten", hw_err, hw_sch, norm_spec=tag)
        rep.add("eckart_young", full_err, _norm(tail, spec), norm_spec=tag)
    return rep


def check_rows(rows, slack=MASTER_SLACK, kind="structural"):
    """Re-verify stored CSV rows; returns the offending rows."""
    bad = []
    for row in rows:
        qty = QUANTITIES.get(row["quantity"])
        if qty is None or qty.kind != kind:
            continue
        measured, bound = float(row["measured"]), float(row["bound"])
        margin = bound - measured if qty.direction == "upper" else measured - bound
        if math.isnan(margin) or margin < -slack:
            bad.append(row)
    return bad
