"""Identity verification engine.

Each registered check compares two independently constructed computations
of the same quantity. Exact checks demand coefficient-for-coefficient
equality of rationals or rational-coefficient polynomials and carry no
tolerance: one unequal coefficient is a fail, and max_residual reports the
mismatch count. Numeric checks evaluate an analytic representation
(truncated double series, contour quadrature, Monte Carlo sampling) in
double precision and compare against the exact rational value, which is
converted to float only at comparison time.

Verdicts are plain data with a stable JSON rendering; identical parameters
(seed included) must reproduce a suite report byte for byte.

Two statement-versus-derivation conflicts are adjudicated at runtime
rather than assumed. The weighted-convolution identity runs under both
exponent variants of its correction sum (ids T6 and T6k; excluded from
exit accounting and summarized in the suite's single adjudication record).
The one-step recurrence check probes both superscript readings of its
middle term, counts whichever variant holds on the stated range, and
reports the other one informationally.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, pi

import numpy as np

from . import sequences as seq
from .exactnum import beta_exact, binomial, deg_falling_factorial
from .fps import Fps, Poly, apply_Dlambda, deg_exp

# variant ids that report on a statement/derivation conflict; they never
# decide an exit code
ADJUDICATION_IDS = frozenset({"T6", "T6k"})

KNOWN_CHECK_IDS = (
    "T1", "T2", "P3", "T4", "P5a", "P5b", "T6", "T6k", "T7", "T8",
    "L9", "C10", "T11", "T12", "T13", "T14", "T15", "T16", "S3", "C-SIX",
)

_BRANCH_FLOOR = 1e-9
_BRACKET_TERMS = 60  # series depth for the entire-function contour bracket


@dataclass(frozen=True)
class NumericConfig:
    """Knobs for every non-exact comparison, all explicit and serialized
    into verdict params so reports are self-describing."""

    tol_rel: float = 1e-7
    tol_abs: float = 1e-9
    quad_nodes: int = 2048
    series_cutoff_k: int = 80
    series_cutoff_l: int = 80
    mc_samples: int = 200_000
    seed: int = 42

    def __post_init__(self):
        if self.tol_rel <= 0 or self.tol_abs <= 0:
            raise ValueError("tolerances must be positive")
        if self.series_cutoff_k < 1 or self.series_cutoff_l < 1:
            raise ValueError("series cutoffs must be >= 1")
        if self.mc_samples < 2:
            raise ValueError("mc_samples must be >= 2 for a standard error")
        if self.quad_nodes < 2 or self.quad_nodes % 2:
            raise ValueError("quad_nodes must be a positive even panel count")

    def as_dict(self) -> dict:
        return {
            "tol_rel": float(self.tol_rel),
            "tol_abs": float(self.tol_abs),
            "quad_nodes": int(self.quad_nodes),
            "series_cutoff_k": int(self.series_cutoff_k),
            "series_cutoff_l": int(self.series_cutoff_l),
            "mc_samples": int(self.mc_samples),
            "seed": int(self.seed),
        }


@dataclass
class Verdict:
    check_id: str
    mode: str  # exact | numeric | monte_carlo
    params: dict
    status: str  # pass | fail
    max_residual: float
    details: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "id": self.check_id,
            "mode": self.mode,
            "params": self.params,
            "status": self.status,
            "max_residual": float(self.max_residual),
            "details": self.details,
        }


def _row(n: int, k: int, lhs, rhs, note: str | None = None) -> dict:
    out = {"n": int(n), "k": int(k), "lhs": str(lhs), "rhs": str(rhs)}
    if note:
        out["note"] = note
    return out


def _meta_row(note: str) -> dict:
    # bookkeeping rows use n = k = -1 so they never clash with data rows
    return _row(-1, -1, "", "", note)


def _params(lam, **rest) -> dict:
    out = {"lambda": str(Fraction(lam))}
    out.update(rest)
    return out


def _num_params(lam, cfg: "NumericConfig", **rest) -> dict:
    return _params(lam, tol_rel=float(cfg.tol_rel), tol_abs=float(cfg.tol_abs), **rest)


class _ExactCollector:
    """Accumulates mismatch rows for a tolerance-free comparison.

    Rows added with counted=False are informational probes (variant forms,
    indices outside a stated range) and never move the verdict."""

    def __init__(self):
        self.rows: list[dict] = []
        self.counted = 0

    def scalar(self, n, lhs, rhs, k=-1, note=None, counted=True):
        if lhs != rhs:
            self.rows.append(_row(n, k, lhs, rhs, note))
            if counted:
                self.counted += 1

    def poly(self, n, lhs: Poly, rhs: Poly, note=None, counted=True):
        for power in range(max(lhs.degree, rhs.degree) + 1):
            a, b = lhs.coeff(power), rhs.coeff(power)
            if a != b:
                self.rows.append(_row(n, power, a, b, note))
                if counted:
                    self.counted += 1

    def info(self, n, k, lhs, rhs, note):
        self.rows.append(_row(n, k, lhs, rhs, note))

    def meta(self, note: str):
        self.rows.append(_meta_row(note))

    def verdict(self, check_id: str, params: dict) -> Verdict:
        status = "pass" if self.counted == 0 else "fail"
        return Verdict(check_id, "exact", params, status, float(self.counted), self.rows)


def _resid(approx: float, exact: float) -> float:
    return abs(approx - exact) / max(1.0, abs(exact))


class _NumericCollector:
    """Accumulates per-row comparisons of a float approximation against an
    exact target; every probed row is recorded, not only the failures."""

    def __init__(self, cfg: NumericConfig):
        self.cfg = cfg
        self.rows: list[dict] = []
        self.max_residual = 0.0
        self.ok = True

    def compare(self, n, approx, exact, k=-1, label="", tail=None) -> bool:
        approx = float(approx)
        exact = float(exact)
        r = _resid(approx, exact)
        passed = r <= self.cfg.tol_rel or abs(approx - exact) <= self.cfg.tol_abs
        note = f"resid={r:.6e}"
        if label:
            note = f"{label}; {note}"
        if tail is not None:
            note += f"; tail={tail:.3e}"
        if not passed:
            self.ok = False
            if tail is not None and tail > self.cfg.tol_abs:
                note += "; inconclusive-fail: truncation tail exceeds tolerance, raise cutoffs"
        self.rows.append(_row(n, k, approx, exact, note))
        self.max_residual = max(self.max_residual, r)
        return passed

    def meta(self, note: str):
        self.rows.append(_meta_row(note))

    def verdict(self, check_id: str, params: dict, mode="numeric") -> Verdict:
        status = "pass" if self.ok else "fail"
        return Verdict(check_id, mode, params, status, float(self.max_residual), self.rows)


# --------------------------------------------------------------------------
# numeric building blocks


def _simpson_weights(panels: int, length: float) -> np.ndarray:
    # composite Simpson over a uniform grid with `panels` subintervals
    if panels < 2 or panels % 2:
        raise ValueError("Simpson rule needs a positive even panel count")
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (length / panels / 3.0)


def _simpson_integral(f, a: float, b: float, panels: int) -> float:
    x = np.linspace(a, b, panels + 1)
    return float(_simpson_weights(panels, b - a) @ f(x))


@lru_cache(maxsize=None)
def _circle_data(lam: Fraction, panels: int):
    """Deformed exponential minus one on the unit circle, with Simpson
    weights. Principal branch throughout; callers must keep |lam| < 1 so
    1 + lam*u stays clear of the negative real axis on the contour."""
    theta = np.linspace(0.0, 2.0 * pi, panels + 1)
    u = np.exp(1j * theta)
    if lam == 0:
        w = np.exp(u)
        floor = 1.0
    else:
        lf = float(lam)
        base = 1.0 + lf * u
        floor = float(np.abs(base).min())
        w = np.exp(np.log(base) / lf)
    weights = _simpson_weights(panels, 2.0 * pi)
    z = w - 1.0
    for arr in (theta, z, weights):
        arr.setflags(write=False)
    return theta, z, weights, floor


def _contour_bracket(z: np.ndarray, p: int) -> np.ndarray:
    """The integrand bracket exp(z)/z^p minus the first p inverse-power
    terms, evaluated as the entire series sum_m z^m/(m+p)! to dodge the
    cancellation the literal form suffers."""
    acc = np.zeros_like(z)
    for m in range(_BRACKET_TERMS, -1, -1):
        acc = acc * z + 1.0 / float(factorial(m + p))
    return acc


@lru_cache(maxsize=None)
def _series_weight_matrix(p: int, kmax: int, lmax: int):
    """Double-series weights w[k,l] = (-1)^l / (k! l! C(k+l+p,p)) shared by
    the plain and modified double-series checks, plus row sums over l."""
    top = kmax + lmax + p
    lnfact = np.concatenate(
        ([0.0], np.cumsum(np.log(np.arange(1, top + 1, dtype=np.float64))))
    )
    ks = np.arange(kmax + 1)[:, None]
    ls = np.arange(lmax + 1)[None, :]
    ln_binom = lnfact[ks + ls + p] - lnfact[ks + ls] - lnfact[p]
    mag = np.exp(-(lnfact[ks] + lnfact[ls] + ln_binom))
    sign = np.where(np.arange(lmax + 1)[None, :] % 2 == 0, 1.0, -1.0)
    m = sign * mag
    rowsums = m.sum(axis=1)
    m.setflags(write=False)
    rowsums.setflags(write=False)
    return m, rowsums


def _incgamma_closed(p: int, zv: float) -> float:
    # closed form of the lower incomplete gamma at integer order p >= 1,
    # obtained by repeated integration by parts of the defining integral
    partial = sum(zv**j / factorial(j) for j in range(p))
    return factorial(p - 1) * (1.0 - float(np.exp(-zv)) * partial)


def _validate_incgamma(p: int) -> float:
    """Guard required before the closed form is trusted: compare it with a
    direct quadrature of the defining integral at sample points."""
    worst = 0.0
    for zv in (0.3, 1.0, 2.7):
        direct = _simpson_integral(lambda t: np.exp(-t) * t ** (p - 1), 0.0, zv, 512)
        closed = _incgamma_closed(p, zv)
        worst = max(worst, abs(direct - closed) / max(1.0, abs(direct)))
    if worst > 1e-9:
        raise RuntimeError(
            f"closed-form lower incomplete gamma failed its quadrature guard: {worst:.3e}"
        )
    return worst


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


# --------------------------------------------------------------------------
# exact checks


def check_T1(lam, p: int, n_max: int, order: int) -> Verdict:
    """Basis construction of the truncated family against its generating
    series, as polynomial equality for every n up to n_max."""
    lam = Fraction(lam)
    _require(order >= n_max, f"order {order} must be at least n_max {n_max}")
    col = _ExactCollector()
    for n in range(n_max + 1):
        col.poly(n, seq.trunc_bell_deg(n, p, lam), seq.trunc_bell_deg_egf(n, p, lam, order))
    return col.verdict("T1", _params(lam, p=p, n_max=n_max, order=order))


def check_T2(lam, n_max: int, order: int) -> Verdict:
    """First-truncation family written as a weighted convolution of the
    degenerate Bernoulli numbers with the plain family, checked as a
    polynomial identity and again at x = 1."""
    lam = Fraction(lam)
    _require(order >= n_max + 1, f"order {order} must be at least n_max+1 = {n_max + 1}")
    col = _ExactCollector()
    x = Poly.x()
    for n in range(n_max + 1):
        lhs = x * seq.trunc_bell_deg(n, 1, lam)
        rhs = Poly.zero()
        for m in range(n + 1):
            w = binomial(n, m) * seq.deg_bernoulli_num(n - m, 1, lam) / (m + 1)
            rhs = rhs + seq.bell_deg(m + 1, lam) * w
        col.poly(n, lhs, rhs)
        col.scalar(n, lhs(Fraction(1)), rhs(Fraction(1)), note="evaluation at x = 1")
    return col.verdict("T2", _params(lam, n_max=n_max, order=order))


def check_P3(lam, p: int, n_max: int) -> Verdict:
    """Unit-interval integral of the plain polynomial family against the
    weight (1-x)^(p-1), done exactly through beta values."""
    lam = Fraction(lam)
    _require(p >= 0, f"p must be >= 0, got {p}")
    col = _ExactCollector()
    if p == 0:
        for n in range(n_max + 1):
            col.poly(n, seq.trunc_bell_deg(n, 0, lam), seq.bell_deg(n, lam),
                     note="p = 0 reduces to the plain family")
    else:
        for n in range(n_max + 1):
            total = Fraction(0)
            for k in range(n + 1):
                total += seq.stirling2_deg(n, k, lam) * beta_exact(k + 1, p)
            col.scalar(n, Fraction(p) * total, seq.trunc_bell_deg(n, p, lam)(Fraction(1)))
    return col.verdict("P3", _params(lam, p=p, n_max=n_max))


def check_P5a(lam, p: int, n_max: int) -> Verdict:
    """Alternating finite double sum for the truncated numbers, obtained by
    expanding the integral weight binomially."""
    lam = Fraction(lam)
    _require(p >= 1, f"the double-sum form needs p >= 1, got {p}")
    col = _ExactCollector()
    for n in range(n_max + 1):
        total = Fraction(0)
        for k in range(n + 1):
            s = seq.stirling2_deg(n, k, lam)
            if s == 0:
                continue
            for m in range(p):
                total += (m + 1) * binomial(p, m + 1) * Fraction((-1) ** m) * s / (k + m + 1)
        col.scalar(n, total, seq.trunc_bell_deg(n, p, lam)(Fraction(1)))
    return col.verdict("P5a", _params(lam, p=p, n_max=n_max))


def check_P5b(lam, p: int, order: int) -> Verdict:
    """Generating-series route through the closed form of the lower
    incomplete gamma at integer order, validated against quadrature first,
    then assembled as an exact series and divided out."""
    lam = Fraction(lam)
    _require(p >= 1, f"the incomplete-gamma form needs p >= 1, got {p}")
    guard = _validate_incgamma(p)
    depth = order + p
    z = deg_exp(Fraction(1), lam, depth) - 1
    partial = Fps.constant(Fraction(0), depth)
    zpow = Fps.constant(Fraction(1), depth)
    for j in range(p):
        partial = partial + zpow.scale(Fraction(1, factorial(j)))
        zpow = zpow * z
    dser = (Fps.constant(Fraction(1), depth) - (-z).exp() * partial).scale(
        Fraction(factorial(p - 1))
    )
    num = (z.exp() * dser).scale(Fraction(p))
    v = num.valuation()
    if v is not None and v < p:
        raise ValueError(f"assembled numerator has valuation {v}, below the required {p}")
    series = num / zpow  # zpow is z**p after the loop
    col = _ExactCollector()
    col.meta(f"closed-form incomplete-gamma guard: max quadrature deviation {guard:.3e}")
    for n in range(order + 1):
        col.scalar(n, series.egf_coeff(n), seq.trunc_bell_deg(n, p, lam)(Fraction(1)))
    return col.verdict("P5b", _params(lam, p=p, order=order))


def check_T6(lam, p: int, n_max: int, order: int, variant: str = "fixed") -> Verdict:
    """Weighted convolution with higher-order degenerate Bernoulli numbers.

    The correction sum exists in two superscript readings; both are run and
    the runtime outcome adjudicates between them. variant='fixed' keeps the
    exponent at p as stated (id T6), variant='running' lets it follow the
    summation index (id T6k)."""
    lam = Fraction(lam)
    _require(variant in ("fixed", "running"), f"unknown variant {variant!r}")
    _require(p >= 0, f"p must be >= 0, got {p}")
    _require(order >= n_max + p, f"order {order} must be at least n_max+p = {n_max + p}")
    col = _ExactCollector()
    x = Poly.x()
    for n in range(n_max + 1):
        lhs = x**p * seq.trunc_bell_deg(n, p, lam)
        rhs = Poly.zero()
        for m in range(n + p + 1):
            w = binomial(n + p, m) / binomial(n + p, n) * seq.deg_bernoulli_num(n + p - m, p, lam)
            rhs = rhs + seq.bell_deg(m, lam) * w
        for k in range(1, p + 1):
            r = p if variant == "fixed" else k
            w = binomial(p, k) / binomial(n + k, n) * seq.deg_bernoulli_num(n + k, r, lam)
            rhs = rhs - Poly.monomial(p - k, w)
        col.poly(n, lhs, rhs)
    check_id = "T6" if variant == "fixed" else "T6k"
    return col.verdict(check_id, _params(lam, p=p, n_max=n_max, order=order, variant=variant))


def _operator_route(lam: Fraction, p: int, order: int) -> Fps:
    """Right side of the differential-operator representation: the entire
    series sum_m (-z)^m... built as sum_m (-1)^m z^m/(m+1)!, hit p-1 times
    with the weighted derivative, then multiplied by exp(z) and signed."""
    z = deg_exp(Fraction(1), lam, order) - 1
    core = Fps.constant(Fraction(0), order)
    zpow = Fps.constant(Fraction(1), order)
    for m in range(order + 1):
        core = core + zpow.scale(Fraction((-1) ** m, factorial(m + 1)))
        if m < order:
            zpow = zpow * z
    cur = core
    for _ in range(p - 1):
        cur = apply_Dlambda(cur, lam)
    return (z.exp() * cur).scale(Fraction((-1) ** (p - 1) * p))


def check_T7(lam, p: int, order: int) -> Verdict:
    """Iterated weighted-derivative representation of the generating
    series; each application of the operator costs one order of depth, so
    coefficients are compared through order-(p-1)."""
    lam = Fraction(lam)
    _require(p >= 1, f"the operator form needs p >= 1, got {p}")
    _require(order >= p, f"order {order} too small for p = {p}")
    series = _operator_route(lam, p, order)
    col = _ExactCollector()
    for n in range(series.order + 1):
        col.scalar(n, series.egf_coeff(n), seq.trunc_bell_deg(n, p, lam)(Fraction(1)))
    col.meta(f"coefficients compared through n = {series.order}")
    return col.verdict("T7", _params(lam, p=p, order=order))


def check_T8(lam, p: int, n_max: int, order: int | None = None) -> Verdict:
    """Finite double sum mixing the degenerate Stirling triangle with plain
    family values."""
    lam = Fraction(lam)
    _require(p >= 1, f"the double-sum convolution needs p >= 1, got {p}")
    col = _ExactCollector()
    for n in range(n_max + 1):
        total = Fraction(0)
        for m in range(n + 1):
            inner = Fraction(0)
            for l in range(m + 1):
                inner += Fraction((-1) ** l, p + l) * seq.stirling2_deg(m, l, lam)
            total += binomial(n, m) * inner * seq.bell_deg(n - m, lam)(Fraction(1))
        col.scalar(n, Fraction(p) * total, seq.trunc_bell_deg(n, p, lam)(Fraction(1)))
    params = _params(lam, p=p, n_max=n_max)
    if order is not None:
        params["order"] = order
    return col.verdict("T8", params)


# --------------------------------------------------------------------------
# numeric checks


def check_T4(lam, p: int, n_max: int, cfg: NumericConfig) -> Verdict:
    """Double-series representation evaluated in floating point under
    explicit cutoffs, with a per-row tail heuristic."""
    lam = Fraction(lam)
    _require(p >= 0, f"p must be >= 0, got {p}")
    m, rowsums = _series_weight_matrix(p, cfg.series_cutoff_k, cfg.series_cutoff_l)
    lamf = float(lam)
    ks = np.arange(cfg.series_cutoff_k + 1, dtype=np.float64)
    fall = np.ones_like(ks)
    ncol = _NumericCollector(cfg)
    for n in range(n_max + 1):
        if n > 0:
            fall = fall * (ks - (n - 1) * lamf)
        approx = float(fall @ rowsums)
        tail = abs(float(fall[-1] * rowsums[-1])) + abs(float(fall @ m[:, -1]))
        exact = float(seq.trunc_bell_deg(n, p, lam)(Fraction(1)))
        ncol.compare(n, approx, exact, tail=tail)
    return ncol.verdict(
        "T4",
        _num_params(lam, cfg, p=p, n_max=n_max,
                    series_cutoff_k=cfg.series_cutoff_k,
                    series_cutoff_l=cfg.series_cutoff_l),
    )


def check_trig(lam, n_max: int, k_or_p, which: str, cfg: NumericConfig) -> Verdict:
    """Contour quadrature checks on the unit circle.

    which='L9' targets the degenerate Stirling triangle (k_or_p fixes a
    single column, None probes all k <= n), which='C10' the plain family,
    which='T11' the truncated family at truncation k_or_p >= 1. All three
    representations need n >= 1 and |lam| < 1."""
    lam = Fraction(lam)
    _require(which in ("L9", "C10", "T11"), f"unknown contour check {which!r}")
    _require(abs(lam) < 1, f"contour checks need |lambda| < 1, got {lam}")
    _require(n_max >= 1, "contour representations hold for n >= 1 only")
    theta, z, w, floor = _circle_data(lam, cfg.quad_nodes)
    params = _num_params(lam, cfg, n_max=n_max, quad_nodes=cfg.quad_nodes)
    ncol = _NumericCollector(cfg)
    if floor < _BRANCH_FLOOR:
        ncol.ok = False
        ncol.meta(
            "inconclusive-fail: contour approaches the branch point, "
            f"min |1 + lambda*u| = {floor:.3e}"
        )
        return ncol.verdict(which, params)
    if which == "L9":
        if k_or_p is not None:
            _require(k_or_p >= 0, f"column index must be >= 0, got {k_or_p}")
            params["k"] = int(k_or_p)
        for n in range(1, n_max + 1):
            sn = np.sin(n * theta)
            cols = range(n + 1) if k_or_p is None else (k_or_p,)
            for k in cols:
                f = z**k / float(factorial(k))
                approx = factorial(n) / pi * float(w @ (np.imag(f) * sn))
                ncol.compare(n, approx, float(seq.stirling2_deg(n, k, lam)), k=k)
    elif which == "C10":
        f = np.exp(z)
        for n in range(1, n_max + 1):
            sn = np.sin(n * theta)
            approx = factorial(n) / pi * float(w @ (np.imag(f) * sn))
            ncol.compare(n, approx, float(seq.bell_deg(n, lam)(Fraction(1))))
    else:
        p = k_or_p
        _require(p is not None and p >= 1, "the truncated contour form needs p >= 1")
        params["p"] = int(p)
        bracket = _contour_bracket(z, p)
        scale = factorial(p)
        for n in range(1, n_max + 1):
            sn = np.sin(n * theta)
            approx = factorial(n) * scale / pi * float(w @ (np.imag(bracket) * sn))
            ncol.compare(n, approx, float(seq.trunc_bell_deg(n, p, lam)(Fraction(1))))
    return ncol.verdict(which, params)


# --------------------------------------------------------------------------
# recurrences and the modified family


def check_T12(lam, p: int, n_max: int, order: int | None = None) -> Verdict:
    """One-step recurrence for the truncated numbers, stated for n >= 2.

    The middle term admits two superscript readings (the truncation index
    kept, or raised by one); both are computed for every n, the variant
    that holds on the stated range is counted, and the other is reported
    informationally, as are the out-of-range rows n in {0, 1}. For p = 0
    the rewritten corollary form with the vanishing lower-bound term is
    checked as well."""
    lam = Fraction(lam)
    _require(p >= 0, f"p must be >= 0, got {p}")
    col = _ExactCollector()

    def val(j: int, q: int) -> Fraction:
        return seq.trunc_bell_deg(j, q, lam)(Fraction(1))

    results = []
    printed_ok = True
    raised_ok = True
    for n in range(n_max + 1):
        lhs = val(n + 1, p)
        base = (Fraction(n + 1) - Fraction(n) * lam) * val(n, p)
        tail = Fraction(0)
        for m in range(n - 1):
            tail += binomial(n, m) * val(m + 1, p) * deg_falling_factorial(lam - 1, n - m, lam)
        r_printed = base - Fraction(p, p + 1) * val(n, p) - tail
        r_raised = base - Fraction(p, p + 1) * val(n, p + 1) - tail
        results.append((n, lhs, r_printed, r_raised))
        if n >= 2:
            printed_ok = printed_ok and r_printed == lhs
            raised_ok = raised_ok and r_raised == lhs
    counted_variant = "printed" if printed_ok or not raised_ok else "raised-index"
    for n, lhs, r_printed, r_raised in results:
        counted_rhs = r_printed if counted_variant == "printed" else r_raised
        other_rhs = r_raised if counted_variant == "printed" else r_printed
        if n < 2:
            col.info(
                n, -1, lhs, counted_rhs,
                "informational, below stated range: printed-form match="
                f"{r_printed == lhs}, raised-index match={r_raised == lhs}",
            )
            continue
        col.scalar(n, lhs, counted_rhs, note=f"counted variant: {counted_variant}")
        if other_rhs != counted_rhs:
            col.info(n, -1, lhs, other_rhs, "non-counted middle-term variant (informational)")
    col.meta(
        f"middle-term exponent probe over n >= 2: printed form holds={printed_ok}, "
        f"raised-index form holds={raised_ok}; counted variant: {counted_variant}"
    )
    if p == 0:
        for n in range(n_max + 1):
            lhs = val(n + 1, 0)
            rhs = (Fraction(n + 1) - Fraction(n) * lam) * val(n, 0)
            for m in range(n):
                # the m = 0 term carries a binomial at lower index -1,
                # taken as 0 by convention
                rhs -= binomial(n, m - 1) * val(m, 0) * deg_falling_factorial(
                    lam - 1, n - m + 1, lam
                )
            note = "rewritten corollary form"
            if n < 2:
                note += " (informational, below stated range)"
            col.scalar(n, lhs, rhs, note=note, counted=n >= 2)
    params = _params(lam, p=p, n_max=n_max)
    if order is not None:
        params["order"] = order
    return col.verdict("T12", params)


def check_T13(lam, n_max: int) -> Verdict:
    """Shifted-argument Stirling polynomials: finite-sum construction
    against the generating-series construction, for every pair l <= n."""
    lam = Fraction(lam)
    col = _ExactCollector()
    for n in range(n_max + 1):
        for l in range(n + 1):
            col.poly(
                n,
                seq.stirling2_deg_poly(n, l, lam),
                seq.stirling2_deg_poly_egf(n, l, lam, n_max),
                note=f"l={l}",
            )
    return col.verdict("T13", _params(lam, n_max=n_max))


def check_T14_T15_T16(lam, p: int, n_max: int, order: int, cfg: NumericConfig,
                      x_points=None) -> list[Verdict]:
    """The modified truncated family: dual construction plus the printed
    and corrected convolution variants (T14), the double-series evaluation
    at fixed rational points (T15), and the one-step recurrence (T16)."""
    lam = Fraction(lam)
    _require(p >= 0, f"p must be >= 0, got {p}")
    _require(order >= n_max, f"order {order} must be at least n_max {n_max}")
    if x_points is None:
        x_points = (Fraction(0), Fraction(1), Fraction(1, 2))
    x_points = tuple(Fraction(x) for x in x_points)

    c14 = _ExactCollector()
    literal_bad = 0
    for n in range(n_max + 1):
        target = seq.trunc_mod_bell_deg(n, p, lam)
        c14.poly(n, target, seq.trunc_mod_bell_deg_egf(n, p, lam, order))
        corrected = Poly.zero()
        literal = Poly.zero()
        const_n = seq.trunc_bell_deg(n, p, lam)(Fraction(1))
        for m in range(n + 1):
            w = binomial(n, m)
            ff = seq.deg_falling_factorial_poly(n - m, lam)
            corrected = corrected + ff * (w * seq.trunc_bell_deg(m, p, lam)(Fraction(1)))
            literal = literal + ff * (w * const_n)
        c14.poly(n, target, corrected, note="convolution route, raised series index")
        if literal != target:
            literal_bad += 1
            c14.info(n, -1, target.to_string(), literal.to_string(),
                     "convolution route, printed constant index (informational)")
    c14.meta(
        f"printed-index convolution variant mismatches on {literal_bad} of "
        f"{n_max + 1} rows (informational)"
    )
    v14 = c14.verdict("T14", _params(lam, p=p, n_max=n_max, order=order))

    c15 = _NumericCollector(cfg)
    m, rowsums = _series_weight_matrix(p, cfg.series_cutoff_k, cfg.series_cutoff_l)
    lamf = float(lam)
    ks = np.arange(cfg.series_cutoff_k + 1, dtype=np.float64)
    for x in x_points:
        xf = float(x)
        fall = np.ones_like(ks)
        for n in range(n_max + 1):
            if n > 0:
                fall = fall * (xf + ks - (n - 1) * lamf)
            approx = float(fall @ rowsums)
            tail = abs(float(fall[-1] * rowsums[-1])) + abs(float(fall @ m[:, -1]))
            exact = Fraction(0)
            for m2 in range(n + 1):
                ff = deg_falling_factorial(x, n - m2, lam)
                if ff == 0:
                    continue
                inner = Fraction(0)
                for k2 in range(m2 + 1):
                    inner += seq.stirling2_deg(m2, k2, lam) / binomial(p + k2, k2)
                exact += binomial(n, m2) * inner * ff
            c15.compare(n, approx, float(exact), label=f"x={x}", tail=tail)
    v15 = c15.verdict(
        "T15",
        _num_params(lam, cfg, p=p, n_max=n_max,
                    series_cutoff_k=cfg.series_cutoff_k,
                    series_cutoff_l=cfg.series_cutoff_l,
                    x_points=[str(x) for x in x_points]),
    )

    c16 = _ExactCollector()
    for n in range(n_max + 1):
        lhs = seq.trunc_mod_bell_deg(n + 1, p, lam)
        rhs = (Poly.x() - Fraction(n) * lam) * seq.trunc_mod_bell_deg(n, p, lam)
        for j in range(n + 1):
            w = binomial(n, j) * deg_falling_factorial(Fraction(1), n - j, lam)
            if w == 0:
                continue
            rhs = rhs - (
                seq.trunc_mod_bell_deg(j, p + 1, lam) * Fraction(p, p + 1)
                - seq.trunc_mod_bell_deg(j, p, lam)
            ) * w
        c16.poly(n, lhs, rhs)
    v16 = c16.verdict("T16", _params(lam, p=p, n_max=n_max))
    return [v14, v15, v16]


def check_S3(lam, p: int, n_max: int, cfg: NumericConfig) -> list[Verdict]:
    """Moment identity for the unit-interval distribution with density
    p(1-x)^(p-1): exactly through beta values, then by seeded Monte Carlo
    with inverse-transform sampling and a four-standard-error band."""
    lam = Fraction(lam)
    _require(p >= 1, f"the moment identity needs p >= 1, got {p}")
    b0 = beta_exact(1, p)
    targets = []
    col = _ExactCollector()
    for n in range(n_max + 1):
        total = Fraction(0)
        for k in range(n + 1):
            total += seq.stirling2_deg(n, k, lam) * (beta_exact(k + 1, p) / b0)
        tgt = seq.trunc_bell_deg(n, p, lam)(Fraction(1))
        targets.append(tgt)
        col.scalar(n, total, tgt)
    v_exact = col.verdict("S3", _params(lam, p=p, n_max=n_max))

    entropy = int.from_bytes(hashlib.sha256(b"S3").digest()[:8], "big")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, entropy])))
    u = rng.random(cfg.mc_samples)
    x = 1.0 - u ** (1.0 / p)
    pows = [np.ones_like(x)]
    for _ in range(n_max):
        pows.append(pows[-1] * x)
    rows = []
    ok = True
    worst = 0.0
    for n in range(n_max + 1):
        y = np.zeros_like(x)
        for k in range(n + 1):
            c = float(seq.stirling2_deg(n, k, lam))
            if c:
                y = y + c * pows[k]
        est = float(y.mean())
        se = float(y.std(ddof=1) / np.sqrt(cfg.mc_samples))
        tgt = float(targets[n])
        if abs(est - tgt) > 4.0 * se:
            ok = False
        worst = max(worst, _resid(est, tgt))
        rows.append(_row(n, -1, est, tgt, f"se={se:.6e}; acceptance band=4*se"))
    v_mc = Verdict(
        "S3",
        "monte_carlo",
        _params(lam, p=p, n_max=n_max, mc_samples=cfg.mc_samples, seed=cfg.seed),
        "pass" if ok else "fail",
        worst,
        rows,
    )
    return [v_exact, v_mc]


# --------------------------------------------------------------------------
# the six-expression composite


_CSIX_ROUTES = {
    1: "unit-interval integral of the plain polynomial family",
    2: "double-series representation (numeric)",
    3: "alternating finite double sum",
    4: "convolution with plain-family values",
    5: "contour quadrature (numeric)",
    6: "distribution-moment sum",
}


def check_CSIX(lam, p: int, n_max: int, cfg: NumericConfig) -> Verdict:
    """All six closing expressions for the truncated numbers against the
    basis construction: exact routes must match exactly, numeric routes
    within tolerance. The detail k field carries the route number."""
    lam = Fraction(lam)
    _require(p >= 1, f"the six-expression display needs p >= 1, got {p}")
    rows: list[dict] = []
    exact_bad = 0
    num_ok = True
    num_max = 0.0

    def compare_exact(n, route, value, ref):
        nonlocal exact_bad
        if value != ref:
            exact_bad += 1
            rows.append(_row(n, route, value, ref, _CSIX_ROUTES[route]))

    def compare_num(n, route, value, ref, tail=None):
        nonlocal num_ok, num_max
        reff = float(ref)
        r = _resid(value, reff)
        passed = r <= cfg.tol_rel or abs(value - reff) <= cfg.tol_abs
        note = f"{_CSIX_ROUTES[route]}; resid={r:.6e}"
        if tail is not None:
            note += f"; tail={tail:.3e}"
        if not passed:
            num_ok = False
            if tail is not None and tail > cfg.tol_abs:
                note += "; inconclusive-fail: truncation tail exceeds tolerance, raise cutoffs"
        rows.append(_row(n, route, value, reff, note))
        num_max = max(num_max, r)

    m, rowsums = _series_weight_matrix(p, cfg.series_cutoff_k, cfg.series_cutoff_l)
    lamf = float(lam)
    ks = np.arange(cfg.series_cutoff_k + 1, dtype=np.float64)
    fall = np.ones_like(ks)

    trig = abs(lam) < 1
    bracket = theta = w = None
    if trig:
        theta, z, w, floor = _circle_data(lam, cfg.quad_nodes)
        if floor < _BRANCH_FLOOR:
            trig = False
            rows.append(_meta_row("route 5 skipped: contour approaches the branch point"))
        else:
            bracket = _contour_bracket(z, p)
            rows.append(_meta_row("route 5 evaluated for n >= 1 only: "
                                  "the contour form needs positive n"))
    else:
        rows.append(_meta_row("route 5 skipped: |lambda| >= 1 keeps the contour "
                              "off the principal branch"))

    b0 = beta_exact(1, p)
    for n in range(n_max + 1):
        ref = seq.trunc_bell_deg(n, p, lam)(Fraction(1))

        poly = seq.bell_deg(n, lam)
        r1 = Fraction(0)
        for j in range(poly.degree + 1):
            r1 += poly.coeff(j) * beta_exact(j + 1, p)
        compare_exact(n, 1, Fraction(p) * r1, ref)

        if n > 0:
            fall = fall * (ks - (n - 1) * lamf)
        approx = float(fall @ rowsums)
        tail = abs(float(fall[-1] * rowsums[-1])) + abs(float(fall @ m[:, -1]))
        compare_num(n, 2, approx, ref, tail=tail)

        r3 = Fraction(0)
        for k2 in range(n + 1):
            s = seq.stirling2_deg(n, k2, lam)
            if s == 0:
                continue
            for m2 in range(p):
                r3 += (m2 + 1) * binomial(p, m2 + 1) * Fraction((-1) ** m2) * s / (k2 + m2 + 1)
        compare_exact(n, 3, r3, ref)

        r4 = Fraction(0)
        for m2 in range(n + 1):
            inner = Fraction(0)
            for l in range(m2 + 1):
                inner += Fraction((-1) ** l, p + l) * seq.stirling2_deg(m2, l, lam)
            r4 += binomial(n, m2) * inner * seq.bell_deg(n - m2, lam)(Fraction(1))
        compare_exact(n, 4, Fraction(p) * r4, ref)

        if trig and n >= 1:
            sn = np.sin(n * theta)
            approx5 = factorial(n) * factorial(p) / pi * float(w @ (np.imag(bracket) * sn))
            compare_num(n, 5, approx5, ref)

        r6 = Fraction(0)
        for k2 in range(n + 1):
            r6 += seq.stirling2_deg(n, k2, lam) * (beta_exact(k2 + 1, p) / b0)
        compare_exact(n, 6, r6, ref)

    status = "pass" if exact_bad == 0 and num_ok else "fail"
    max_residual = float(exact_bad) if exact_bad else num_max
    params = _num_params(lam, cfg, p=p, n_max=n_max,
                         quad_nodes=cfg.quad_nodes,
                         series_cutoff_k=cfg.series_cutoff_k,
                         series_cutoff_l=cfg.series_cutoff_l)
    return Verdict("C-SIX", "numeric", params, status, max_residual, rows)


# --------------------------------------------------------------------------
# suite runner


@dataclass(frozen=True)
class SuiteGrid:
    lambdas: tuple = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-1, 3))
    ps: tuple = (0, 1, 2, 3, 4)
    n_max: int = 10
    order: int = 24
    x_points: tuple = (Fraction(0), Fraction(1), Fraction(1, 2))


def default_grid(**overrides) -> SuiteGrid:
    return SuiteGrid(**overrides)


@dataclass
class SuiteReport:
    verdicts: list
    summary: dict

    def to_json_dict(self) -> dict:
        return {
            "summary": self.summary,
            "verdicts": [v.to_json_dict() for v in self.verdicts],
        }

    def exit_code(self) -> int:
        return 0 if self.summary["required_pass"] else 1


def _verdict_sort_key(v: Verdict):
    return (v.check_id, v.mode, json.dumps(v.params, sort_keys=True))


def _adjudication_record(verdicts: list[Verdict]) -> dict | None:
    outcomes = {}
    for vid in sorted(ADJUDICATION_IDS):
        statuses = [v.status for v in verdicts if v.check_id == vid]
        if not statuses:
            continue
        if all(s == "pass" for s in statuses):
            outcomes[vid] = "pass"
        elif all(s == "fail" for s in statuses):
            outcomes[vid] = "fail"
        else:
            outcomes[vid] = "mixed"
    if not outcomes:
        return None
    clean = [vid for vid, o in outcomes.items() if o == "pass"]
    if len(clean) == len(outcomes) and len(outcomes) > 1:
        selected = "both"
    elif len(clean) == 1:
        selected = clean[0]
    else:
        selected = "neither"
    return {
        "subject": "exponent variant in the correction sum of the "
                   "weighted-convolution identity",
        "checked": sorted(outcomes),
        "outcomes": outcomes,
        "selected": selected,
        "note": "variant ids are excluded from exit accounting",
    }


def exit_code_for(verdicts: list[Verdict]) -> int:
    ok = all(v.status == "pass" for v in verdicts if v.check_id not in ADJUDICATION_IDS)
    return 0 if ok else 1


def _summarize(verdicts, skipped, grid: SuiteGrid, cfg: NumericConfig) -> dict:
    by_id: dict[str, dict] = {}
    for v in verdicts:
        slot = by_id.setdefault(v.check_id, {"pass": 0, "fail": 0})
        slot[v.status] += 1
    passed = sum(1 for v in verdicts if v.status == "pass")
    record = _adjudication_record(verdicts)
    return {
        "total": len(verdicts),
        "passed": passed,
        "failed": len(verdicts) - passed,
        "skipped": len(skipped),
        "skipped_checks": skipped,
        "required_pass": exit_code_for(verdicts) == 0,
        "counts_by_id": by_id,
        "adjudication": [record] if record else [],
        "grid": {
            "lambdas": [str(Fraction(x)) for x in grid.lambdas],
            "ps": list(grid.ps),
            "n_max": grid.n_max,
            "order": grid.order,
            "x_points": [str(Fraction(x)) for x in grid.x_points],
        },
        "config": cfg.as_dict(),
    }


def run_suite(grid: SuiteGrid | None = None, cfg: NumericConfig | None = None) -> SuiteReport:
    """Run every registered check over the grid. Failures are data, not
    errors; ordering of the verdict list is deterministic."""
    grid = grid or SuiteGrid()
    cfg = cfg or NumericConfig()
    verdicts: list[Verdict] = []
    skipped: list[dict] = []

    def skip(check_id, lam, p=None):
        entry = {
            "id": check_id,
            "lambda": str(lam),
            "reason": "|lambda| >= 1 is outside the contour domain",
        }
        if p is not None:
            entry["p"] = p
        skipped.append(entry)

    for lam in grid.lambdas:
        lam = Fraction(lam)
        trig_ok = abs(lam) < 1
        verdicts.append(check_T2(lam, grid.n_max, grid.order))
        verdicts.append(check_T13(lam, grid.n_max))
        if trig_ok:
            verdicts.append(check_trig(lam, grid.n_max, None, "L9", cfg))
            verdicts.append(check_trig(lam, grid.n_max, None, "C10", cfg))
        else:
            skip("L9", lam)
            skip("C10", lam)
        for p in grid.ps:
            verdicts.append(check_T1(lam, p, grid.n_max, grid.order))
            verdicts.append(check_P3(lam, p, grid.n_max))
            verdicts.append(check_T4(lam, p, grid.n_max, cfg))
            verdicts.append(check_T6(lam, p, grid.n_max, grid.order, "fixed"))
            verdicts.append(check_T6(lam, p, grid.n_max, grid.order, "running"))
            verdicts.append(check_T12(lam, p, grid.n_max, grid.order))
            verdicts.extend(
                check_T14_T15_T16(lam, p, grid.n_max, grid.order, cfg, grid.x_points)
            )
            if p >= 1:
                verdicts.append(check_P5a(lam, p, grid.n_max))
                verdicts.append(check_P5b(lam, p, grid.order))
                verdicts.append(check_T7(lam, p, grid.order))
                verdicts.append(check_T8(lam, p, grid.n_max, grid.order))
                verdicts.extend(check_S3(lam, p, grid.n_max, cfg))
                verdicts.append(check_CSIX(lam, p, grid.n_max, cfg))
                if trig_ok:
                    verdicts.append(check_trig(lam, grid.n_max, p, "T11", cfg))
                else:
                    skip("T11", lam, p)
    verdicts.sort(key=_verdict_sort_key)
    return SuiteReport(verdicts=verdicts, summary=_summarize(verdicts, skipped, grid, cfg))


# --------------------------------------------------------------------------
# single-check dispatch (used by the command line)


def run_check(check_id: str, lam, *, p=None, k=None, n_max=10, order=24,
              cfg: NumericConfig | None = None, x_points=None) -> list[Verdict]:
    cfg = cfg or NumericConfig()
    lam = Fraction(lam)
    needs_p = {"T1", "P3", "P5a", "T4", "P5b", "T6", "T6k", "T7", "T8",
               "T11", "T12", "T14", "T15", "T16", "S3", "C-SIX"}
    if check_id in needs_p and p is None:
        raise ValueError(f"check {check_id} requires p")
    if check_id == "T1":
        return [check_T1(lam, p, n_max, order)]
    if check_id == "T2":
        return [check_T2(lam, n_max, order)]
    if check_id == "P3":
        return [check_P3(lam, p, n_max)]
    if check_id == "P5a":
        return [check_P5a(lam, p, n_max)]
    if check_id == "T4":
        return [check_T4(lam, p, n_max, cfg)]
    if check_id == "P5b":
        return [check_P5b(lam, p, order)]
    if check_id == "T6":
        return [
            check_T6(lam, p, n_max, order, "fixed"),
            check_T6(lam, p, n_max, order, "running"),
        ]
    if check_id == "T6k":
        return [check_T6(lam, p, n_max, order, "running")]
    if check_id == "T7":
        return [check_T7(lam, p, order)]
    if check_id == "T8":
        return [check_T8(lam, p, n_max, order)]
    if check_id == "L9":
        return [check_trig(lam, n_max, k, "L9", cfg)]
    if check_id == "C10":
        return [check_trig(lam, n_max, None, "C10", cfg)]
    if check_id == "T11":
        return [check_trig(lam, n_max, p, "T11", cfg)]
    if check_id == "T12":
        return [check_T12(lam, p, n_max, order)]
    if check_id == "T13":
        return [check_T13(lam, n_max)]
    if check_id in ("T14", "T15", "T16"):
        triple = check_T14_T15_T16(lam, p, n_max, order, cfg, x_points)
        return [v for v in triple if v.check_id == check_id]
    if check_id == "S3":
        return [*check_S3(lam, p, n_max, cfg)]
    if check_id == "C-SIX":
        return [check_CSIX(lam, p, n_max, cfg)]
    raise ValueError(f"unknown identity id: {check_id}")


def verdicts_to_json_text(verdicts: list[Verdict]) -> str:
    return json.dumps([v.to_json_dict() for v in verdicts], sort_keys=True, indent=2) + "\n"


def report_to_json_text(report: SuiteReport) -> str:
    return json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n"
