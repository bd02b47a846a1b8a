"""Command-line front end and verification harness.

Every subcommand prints one JSON document (or CSV rows with --format csv). Invalid
input exits with status 2 and an error document; a failing `verify` run exits 1.
"""
from __future__ import annotations

import csv
import io
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable

import click
import mpmath

from . import __version__
from .discgroup import DiscElement, Level
from .eisenstein import cusp_data, eisenstein_side, lattice_sum, parabolic_eisenstein
from .klf import (
    borcherds_lift_value,
    elliptic_klf,
    genus_zero_product_order,
    hyperbolic_klf,
    hyperbolic_klf_constants,
    numeric_cusp_order,
    parabolic_klf,
)
from .numtheory import divisor_sum, divisors, euler_phi, is_squarefree, moebius
from .poincare import (
    FourierCoefficientTable,
    PoincareIndex,
    laplacian_residual,
    poincare_direct,
    poincare_special_value,
    theta_d_coordinates,
    vq_poincare_identity_check,
)
from .qforms import enumerate_classes, heegner_point, hurwitz_class_number
from .qseries import (
    ThetaCombo,
    UnsupportedInput,
    borcherds_product,
    eta_product,
    hauptmodul,
    theta_combo_expansion,
    theta_d,
    unary_theta,
    v_q_operator,
)
from .specfun import PrecisionContext
from .weilrep import (
    S_GEN,
    T_GEN,
    MetaplecticElement,
    compose,
    eisenstein_zeta_explicit,
    kloosterman_table,
    rho_S,
    rho_T,
    weil_apply,
)

SCHEMA_VERSION = "1"
DEFAULT_BITS = 128


class InvalidInput(ValueError):
    pass


def default_precision() -> int:
    raw = os.environ.get("EISENKRON_PRECISION")
    if raw is None:
        return DEFAULT_BITS
    try:
        return int(raw)
    except ValueError:
        raise InvalidInput(f"EISENKRON_PRECISION must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_BITS
    bounds: dict = field(default_factory=dict)  # coset, lattice, order, c_cutoff, j_cutoff
    tolerances: dict = field(default_factory=dict)  # check id prefix -> override
    fmt: str = "json"
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.precision_bits < 64:
            raise InvalidInput("precision below 64 bits is not supported")
        for name, v in self.bounds.items():
            if v is not None and v <= 0:
                raise InvalidInput(f"bound {name} must be positive")
        floor = 2.0 ** (-self.precision_bits / 2)
        for name, v in self.tolerances.items():
            if v < floor:
                raise InvalidInput(f"tolerance {name}={v} is below 2^(-bits/2) = {floor:.3g}")
        if self.fmt not in ("json", "csv"):
            raise InvalidInput(f"unknown format {self.fmt!r}")

    def bound(self, name: str, default):
        v = self.bounds.get(name)
        return default if v is None else v


# ---------------------------------------------------------------------------
# serialization


def _encode(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, (mpmath.mpf,)):
        return mpmath.nstr(x, 30)
    if isinstance(x, (complex, mpmath.mpc)):
        z = mpmath.mpc(x)
        return {"re": mpmath.nstr(z.real, 30), "im": mpmath.nstr(z.imag, 30)}
    if isinstance(x, dict):
        return {str(k): _encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_encode(v) for v in x]
    if hasattr(x, "tolist"):
        return _encode(x.tolist())
    return str(x)


def _flatten(prefix: str, x, rows: list):
    if isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(x, list):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, x))


def render(payload: dict, fmt: str) -> str:
    if fmt not in ("json", "csv"):
        raise ValueError(f"unknown output format {fmt!r}")
    doc = {"schema": SCHEMA_VERSION, **_encode(payload)}
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if "checks" in doc:
        writer.writerow(["id", "deviation", "tolerance", "passed", "seconds", "detail"])
        for c in doc["checks"]:
            writer.writerow([c["id"], c["deviation"], c["tolerance"], c["passed"], c["seconds"], c["detail"]])
        return buf.getvalue()
    rows: list = []
    _flatten("", doc, rows)
    writer.writerow(["key", "value"])
    writer.writerows(rows)
    return buf.getvalue()


def _parse_complex(text: str) -> complex:
    try:
        z = complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InvalidInput(f"cannot parse {text!r} as a complex number") from None
    if z.imag <= 0:
        raise InvalidInput("z must lie in the upper half-plane")
    return z


def _require_index(N: int, beta: int, D: int):
    if N < 1 or not is_squarefree(N):
        raise InvalidInput(f"level {N} is not a positive squarefree integer")
    if (D - beta * beta) % (4 * N):
        raise InvalidInput(f"D = {D} is not congruent to beta^2 = {beta * beta} mod {4 * N}")


def _valued(value, err) -> dict:
    return {"value": value, "est_error": err}


# ---------------------------------------------------------------------------
# checks


@dataclass
class Check:
    id: str
    deviation: float
    tolerance: float
    passed: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass(frozen=True)
class CheckTask:
    id: str
    func: Callable
    kwargs: dict
    bits: int


def _run_task(task: CheckTask) -> Check:
    start = time.perf_counter()
    with PrecisionContext(task.bits):
        out = task.func(**task.kwargs)
    out.id = task.id
    out.seconds = round(time.perf_counter() - start, 3)
    return out


def _exact(dev, detail="") -> Check:
    dev = abs(Fraction(dev)) if not isinstance(dev, float) else dev
    return Check("", float(dev), 0.0, dev == 0, detail)


def _within(dev, tol, detail="") -> Check:
    dev = float(dev)
    return Check("", dev, tol, dev <= tol, detail)


def check_borcherds_eta(N: int, c: int, order: int) -> Check:
    """Product from theta-coefficient exponents against eta(cz) eta(Nz/c), coefficientwise."""
    data = borcherds_product(ThetaCombo.of(N, {c: 1}), order=order)
    product = data.product_expansion(order)
    exps: dict = {}
    for d in (c, N // c):
        exps[d] = exps.get(d, 0) + 1
    eta = eta_product(exps, order)
    bad = sum(1 for k in range(order) if product.coeffs[k] != eta.coeffs[k])
    bad += product.offset != eta.offset
    nonint = sum(1 for v in product.coeffs if v.denominator != 1)
    return _exact(bad + nonint, f"offset {product.offset}, {order} coefficients")


def check_character_sum(N: int) -> Check:
    """sum_{c | N} mu((c,d)) c = mu(d) sigma_1(N/d) phi(d) for every d | N."""
    worst = 0
    for d in divisors(N):
        lhs = sum(moebius(gcd(c, d)) * c for c in divisors(N))
        rhs = moebius(d) * divisor_sum(N // d, 1) * euler_phi(d)
        worst = max(worst, abs(lhs - rhs))
    return _exact(worst, f"{len(divisors(N))} divisors")


def check_lift_identity(N: int, beta: int, D: int, z: complex, s: float, lattice_bound: float, coset_bound: float, tol: float, tail_tol: float) -> Check:
    m = Fraction(D, 4 * N)
    lat = lattice_sum(N, beta, m, z, s, bound=lattice_bound)
    eis = eisenstein_side(N, beta, m, z, s, bound=coset_bound)
    dev = abs(lat.value - eis.value)
    tails_ok = lat.est_tail < tail_tol and eis.est_tail < tail_tol
    ok = dev <= tol and tails_ok
    return Check("", float(dev), tol, ok, f"lattice {complex(lat.value):.9g} tail {lat.est_tail:.2g}; eisenstein {complex(eis.value):.9g} tail {eis.est_tail:.2g}")


def check_poincare_fourier(N: int, beta: int, m: Fraction, s: float, n_max: int, direct_c: int, fourier_c: int, j_cutoff: int, tol: float) -> Check:
    idx = PoincareIndex(N, beta, m)
    tau = 1j
    direct = poincare_direct(idx, tau, s, c_bound=direct_c, d_bound=max(4000.0, 20.0 * direct_c))
    route = "explicit" if (idx.beta, idx.m) == (0, 0) else "direct"
    table = FourierCoefficientTable(idx, s, n_max=n_max, j_cutoff=j_cutoff, c_cutoff=fourier_c, zeta_route=route)
    fourier, err = table.evaluate(tau)
    scale = max(abs(x) for x in direct.value)
    dev = max(abs(a - b) for a, b in zip(direct.value, fourier)) / scale
    return _within(dev, tol, f"direct tail {direct.est_tail:.2g}, fourier remainder {err:.2g}, zeta route {route}")


def check_kloosterman_explicit(N: int, n_max: int, s: float, cutoff: int, tol: float) -> Check:
    """Truncated Kloosterman zeta Z(1/4 + s; 0, 0, gamma, n) against the L-function closed form.

    Passing requires |truncated - closed form| + rigorous tail <= tol, so the statement holds
    for the full series.
    """
    from .poincare import _pairs_up_to

    pairs = [(0, Fraction(0))] + _pairs_up_to(N, Fraction(n_max))
    table = kloosterman_table(N, 0, 0, pairs, cutoff)
    vals = table.zeta(complex(mpmath.mpf(1) / 4 + s))
    worst, tail = 0.0, 0.0
    for (g, n), z in zip(pairs, vals):
        exact = complex(eisenstein_zeta_explicit(s, N, g, n))
        worst = max(worst, abs(complex(z.value) - exact))
        tail = max(tail, z.tail_bound)
    return Check("", worst, tol, worst + tail <= tol, f"{len(pairs)} pairs, cutoff {cutoff}, tail bound {tail:.2g}")


def check_hyperbolic_n1() -> Check:
    got = hyperbolic_klf_constants(6, 1, Fraction(1, 24))
    return _exact(0 if got == {6: Fraction(3)} else 1, f"C = {got}")


def check_hyperbolic_vanishing(N: int, n_max: int) -> Check:
    """(n, N) > 1 gives the zero map when E(N) minus {1} is {N}; each surviving map counts as one failure."""
    bad, seen = 0, 0
    for n in range(1, n_max + 1):
        if gcd(n, N) == 1:
            continue
        seen += 1
        consts = hyperbolic_klf_constants(N, n % (2 * N), Fraction(n * n, 4 * N))
        bad += any(v != 0 for v in consts.values())
    return _exact(bad, f"{seen} indices")


def check_nonsquare_zero(N: int, D_max: int) -> Check:
    bad, seen = 0, 0
    for D in range(1, D_max + 1):
        r = int(D**0.5)
        if r * r == D or (r + 1) ** 2 == D:
            continue
        for beta in range(2 * N):
            if (D - beta * beta) % (4 * N):
                continue
            seen += 1
            bad += not poincare_special_value(PoincareIndex.from_disc(N, beta, D)).is_zero
    return _exact(bad, f"{seen} nonsquare indices")


def check_constants_vs_coordinates(N: int, n_max: int) -> Check:
    """C(d) against -2 lambda_d, the theta_d coordinates of the special value."""
    worst, seen = Fraction(0), 0
    for n in range(1, n_max + 1):
        for beta in range(2 * N):
            m = Fraction(n * n, 4 * N)
            if (m - Fraction(beta * beta, 4 * N)).denominator != 1:
                continue
            try:
                consts = hyperbolic_klf_constants(N, beta, m)
            except ValueError:
                continue  # no Atkin-Lehner image of n equals beta
            lam = theta_d_coordinates(PoincareIndex(N, beta, m))
            seen += 1
            worst = max([worst] + [abs(consts[d] + 2 * lam[d]) for d in consts])
    return _exact(worst, f"{seen} indices")


def check_vq_theta(N: int, q: int, bound: int) -> Check:
    lhs = v_q_operator(unary_theta(N // q, 1, bound * q), q, N)
    rhs = None
    for a in divisors(q):
        term = unary_theta(N, a, bound)
        rhs = term if rhs is None else rhs + term
    diff = lhs - rhs
    worst = max((abs(Fraction(v)) for v in diff.coeffs.values()), default=Fraction(0))
    return _exact(worst, f"order bound {lhs.order_bound}")


def check_vq_poincare(N: int, q: int, n: int) -> Check:
    res = vq_poincare_identity_check(N, q, n)
    return _exact(0 if res.ok else max(res.max_deviation, Fraction(1)), "lambda = {" + ", ".join(f"{d}: {v}" for d, v in sorted(res.lhs.items())) + "}")


def _hurwitz_bruteforce(D: int) -> Fraction:
    """Reduced forms b^2 - 4ac = D < 0 with |b| <= a <= c, weighted 1/2 and 1/3 at the two special points."""
    total = Fraction(0)
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if a == b == c:
                total += Fraction(1, 3)
            elif b == 0 and a == c:
                total += Fraction(1, 2)
            else:
                total += 1
        a += 1
    return total


def check_hurwitz_value(N: int, beta: int, m: Fraction, expected: Fraction) -> Check:
    got = hurwitz_class_number(DiscElement(Level(N), beta), m)
    return _exact(got - expected, f"H = {got}")


def check_hurwitz_oracle(D_max: int) -> Check:
    worst, seen = Fraction(0), 0
    for D in range(-1, -D_max - 1, -1):
        if D % 4 not in (0, 1):
            continue
        beta = 0 if D % 4 == 0 else 1
        got = hurwitz_class_number(DiscElement(Level(1), beta), Fraction(D, 4))
        worst = max(worst, abs(got - _hurwitz_bruteforce(D)))
        seen += 1
    return _exact(worst, f"{seen} discriminants")


def _matrix_dev(A, B) -> mpmath.mpf:
    return max(abs(A[i, j] - B[i, j]) for i in range(A.rows) for j in range(A.cols))


def check_weil_s4(N: int) -> Check:
    """rho(S)^4 equals rho of the metaplectic (-I)^2 = (I, -1), which acts as -1."""
    RS = rho_S(N)
    S4 = RS * RS * RS * RS
    Z2 = weil_apply(N, MetaplecticElement(((1, 0), (0, 1)), -1))
    dev = max(_matrix_dev(S4, Z2), _matrix_dev(S4, -mpmath.eye(2 * N)))
    return _within(dev, 1e-25)


def check_weil_st3(N: int) -> Check:
    RS, RT = rho_S(N), rho_T(N)
    ST = RS * RT
    dev = _matrix_dev(RS * RS, ST * ST * ST)
    return _within(dev, 1e-25)


def _random_metaplectic(rng: random.Random, length: int) -> MetaplecticElement:
    M = MetaplecticElement(((1, 0), (0, 1)), 1)
    for _ in range(length):
        k = rng.choice([-3, -2, -1, 1, 2, 3])
        step = T_GEN if rng.random() < 0.5 else S_GEN
        for _ in range(abs(k) if step is T_GEN else 1):
            g = step
            if step is T_GEN and k < 0:
                g = MetaplecticElement(((1, -1), (0, 1)), 1)
            M = compose(M, g)
    return M


def check_weil_unitary(N: int, count: int, seed: int, tol: float) -> Check:
    rng = random.Random(seed)
    worst = mpmath.mpf(0)
    eye = mpmath.eye(2 * N)
    for _ in range(count):
        R = weil_apply(N, _random_metaplectic(rng, rng.randint(1, 8)))
        worst = max(worst, _matrix_dev(R * R.H, eye))
    return _within(worst, tol, f"{count} random elements")


def check_laplacian(m: Fraction, tol: float) -> Check:
    res = laplacian_residual(PoincareIndex(1, 0, m), 1j, 1.5)
    return _within(res, tol)


def _random_gamma0(rng: random.Random, N: int):
    a, b, c, d = 1, 0, 0, 1
    for _ in range(rng.randint(1, 4)):
        k = rng.choice([-2, -1, 1, 2])
        if rng.random() < 0.5:
            a, b, c, d = a, a * k + b, c, c * k + d
        else:
            a, b, c, d = a + b * N * k, b, c + d * N * k, d
    return (a, b), (c, d)


def _klf_evaluators(N: int) -> dict:
    if N == 1:
        return {"parabolic": parabolic_klf(1), "hyperbolic": hyperbolic_klf(1, 0, 1), "elliptic": elliptic_klf(1, 0, -1)}
    return {
        "parabolic": parabolic_klf(N),
        "hyperbolic": hyperbolic_klf(N, 1, Fraction(1, 4 * N)),
        "elliptic": elliptic_klf(N, 1, Fraction(-23, 4 * N)),
    }


def check_klf_invariance(N: int, kind: str, count: int, seed: int, tol: float) -> Check:
    rng = random.Random(seed * 1000 + N)
    res = _klf_evaluators(N)[kind]
    worst = mpmath.mpf(0)
    for _ in range(count):
        z = mpmath.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.4, 1.6))
        (a, b), (c, d) = _random_gamma0(rng, N)
        w = (a * z + b) / (c * z + d)
        worst = max(worst, abs(res(w) - res(z)))
    return _within(worst, tol, f"{count} pairs")


def check_lift_consistency(N: int, tol: float) -> Check:
    """-4 K(z) - 2 (log(4 pi N) - gamma) against Phi(z, P_00) from the Borcherds product."""
    K = parabolic_klf(N)
    worst = mpmath.mpf(0)
    for z in (mpmath.mpc(0.1, 0.9), mpmath.mpc(-0.37, 1.3), mpmath.mpc(0.25, 0.6)):
        lhs = -4 * K(z) - 2 * (mpmath.log(4 * mpmath.pi * N) - mpmath.euler)
        worst = max(worst, abs(lhs - borcherds_lift_value(N, z)))
    return _within(worst, tol)


def check_cusp_order(N: int, beta: int, D: int) -> Check:
    m = Fraction(D, 4 * N)
    lead = genus_zero_product_order(N, beta, m)
    H = hurwitz_class_number(DiscElement(Level(N), beta % (2 * N)), m)
    expected = -H / len(divisors(N))
    numeric = numeric_cusp_order(elliptic_klf(N, beta, m))
    return _exact(lead - expected, f"order {lead}, -H/sigma_0 = {expected}, sampled {mpmath.nstr(numeric, 12)}")


# ---------------------------------------------------------------------------
# suites


@dataclass(frozen=True)
class SuiteOptions:
    level: int | None = None
    beta: int | None = None
    disc: int | None = None
    s: float | None = None
    q: int | None = None
    z: complex | None = None


LIFT_CASES = [(1, 0, -4), (6, 1, -23), (6, 1, 1), (1, 0, 0), (6, 0, 0)]
LIFT_POINT = complex(0.1234, 0.8765)


def suite_borcherds_eta(opts: SuiteOptions, cfg: RunConfig):
    order = int(cfg.bound("order", 50))
    levels = [opts.level] if opts.level else [6, 10, 15, 30]
    return [(f"borcherds-eta/N{N}/c{c}", check_borcherds_eta, dict(N=N, c=c, order=order)) for N in levels for c in divisors(N)]


def suite_character_sum(opts: SuiteOptions, cfg: RunConfig):
    levels = [opts.level] if opts.level else [N for N in range(1, 211) if is_squarefree(N)]
    return [(f"character-sum/N{N:03d}", check_character_sum, dict(N=N)) for N in levels]


def suite_lift_identity(opts: SuiteOptions, cfg: RunConfig):
    cases = LIFT_CASES
    if opts.level is not None:
        cases = [c for c in cases if c[0] == opts.level]
    if opts.disc is not None:
        cases = [c for c in cases if c[2] == opts.disc]
    if opts.beta is not None:
        cases = [c for c in cases if c[1] % (2 * c[0]) == opts.beta % (2 * c[0])]
    if opts.level is not None and opts.disc is not None and not cases:
        beta = opts.beta if opts.beta is not None else next(b for b in range(2 * opts.level) if (opts.disc - b * b) % (4 * opts.level) == 0)
        _require_index(opts.level, beta, opts.disc)
        cases = [(opts.level, beta, opts.disc)]
    s = opts.s if opts.s is not None else 1.3
    z = opts.z if opts.z is not None else LIFT_POINT
    tol = cfg.tolerances.get("lift-identity", 1e-3)
    return [
        (
            f"lift-identity/N{N}/beta{b}/D{D}",
            check_lift_identity,
            dict(N=N, beta=b, D=D, z=z, s=s, lattice_bound=cfg.bound("lattice", 3e5), coset_bound=cfg.bound("coset", 1500.0), tol=tol, tail_tol=5e-4),
        )
        for N, b, D in cases
    ]


def suite_poincare_fourier(opts: SuiteOptions, cfg: RunConfig):
    ms = [Fraction(0), Fraction(1), Fraction(-1)]
    s = opts.s if opts.s is not None else 1.25
    tasks = []
    for m in ms:
        # m = 0 compares against the untruncated closed-form zeta, so the coset sum runs further
        c_cut = int(cfg.bound("c_cutoff", 400 if m == 0 else 200))
        kw = dict(N=1, beta=0, m=m, s=s, n_max=15, direct_c=c_cut, fourier_c=c_cut, j_cutoff=int(cfg.bound("j_cutoff", 60)), tol=cfg.tolerances.get("poincare-fourier", 1e-3))
        tasks.append((f"poincare-fourier/m{m}", check_poincare_fourier, kw))
    return tasks


def suite_kloosterman_explicit(opts: SuiteOptions, cfg: RunConfig):
    levels = [opts.level] if opts.level else [1, 2, 3, 6]
    s = opts.s if opts.s is not None else 1.5
    return [
        (f"kloosterman-explicit/N{N}", check_kloosterman_explicit, dict(N=N, n_max=5, s=s, cutoff=int(cfg.bound("c_cutoff", 300)), tol=cfg.tolerances.get("kloosterman-explicit", 1e-3)))
        for N in levels
    ]


def suite_klf_constants(opts: SuiteOptions, cfg: RunConfig):
    return [
        ("klf-constants/N6-n1", check_hyperbolic_n1, {}),
        ("klf-constants/N6-shared-factor", check_hyperbolic_vanishing, dict(N=6, n_max=40)),
        ("klf-constants/N6-nonsquare", check_nonsquare_zero, dict(N=6, D_max=120)),
        ("klf-constants/N6-coordinates", check_constants_vs_coordinates, dict(N=6, n_max=25)),
        ("klf-constants/N30-coordinates", check_constants_vs_coordinates, dict(N=30, n_max=13)),
    ]


def suite_vq(opts: SuiteOptions, cfg: RunConfig):
    bound = int(cfg.bound("order", 200))
    pairs = [(6, 2), (6, 3), (30, 5), (30, 6)]
    if opts.level is not None:
        pairs = [p for p in pairs if p[0] == opts.level]
    if opts.q is not None:
        pairs = [p for p in pairs if p[1] == opts.q]
    tasks = [(f"vq/theta/N{N}/q{q}", check_vq_theta, dict(N=N, q=q, bound=bound)) for N, q in pairs]
    if (opts.level in (None, 30)) and (opts.q in (None, 5)):
        tasks.append(("vq/poincare/N30/q5/n5", check_vq_poincare, dict(N=30, q=5, n=5)))
    return tasks


def suite_hurwitz(opts: SuiteOptions, cfg: RunConfig):
    tasks = [
        ("hurwitz/N1-D-4", check_hurwitz_value, dict(N=1, beta=0, m=Fraction(-1), expected=Fraction(1, 2))),
        ("hurwitz/N1-D-23", check_hurwitz_value, dict(N=1, beta=1, m=Fraction(-23, 4), expected=Fraction(3))),
    ]
    for N in (1, 6, 30):
        tasks.append((f"hurwitz/N{N}-D0", check_hurwitz_value, dict(N=N, beta=0, m=Fraction(0), expected=Fraction(-divisor_sum(N, 1), 6))))
    tasks.append(("hurwitz/N1-oracle", check_hurwitz_oracle, dict(D_max=100)))
    return tasks


def suite_weil_relations(opts: SuiteOptions, cfg: RunConfig):
    levels = [opts.level] if opts.level else [1, 6]
    tol = cfg.tolerances.get("weil-relations", 1e-25)
    tasks = []
    for N in levels:
        tasks.append((f"weil-relations/N{N}/S4", check_weil_s4, dict(N=N)))
        tasks.append((f"weil-relations/N{N}/S2-ST3", check_weil_st3, dict(N=N)))
        tasks.append((f"weil-relations/N{N}/unitary", check_weil_unitary, dict(N=N, count=200, seed=cfg.seed, tol=tol)))
    return tasks


def suite_laplacian(opts: SuiteOptions, cfg: RunConfig):
    tol = cfg.tolerances.get("laplacian", 1e-4)
    return [(f"laplacian/m{m}", check_laplacian, dict(m=Fraction(m), tol=tol)) for m in (0, 1, -1)]


def suite_klf_invariance(opts: SuiteOptions, cfg: RunConfig):
    levels = [opts.level] if opts.level else [1, 6]
    tol = cfg.tolerances.get("klf-invariance", 1e-15)
    tasks = []
    for N in levels:
        for kind in ("parabolic", "hyperbolic", "elliptic"):
            tasks.append((f"klf-invariance/N{N}/{kind}", check_klf_invariance, dict(N=N, kind=kind, count=20, seed=cfg.seed, tol=tol)))
        tasks.append((f"klf-invariance/N{N}/lift", check_lift_consistency, dict(N=N, tol=1e-20)))
    return tasks


def suite_cusp_order(opts: SuiteOptions, cfg: RunConfig):
    cases = [(1, 0, -4), (2, 0, -8), (3, 3, -3)]
    return [(f"cusp-order/N{N}/D{D}", check_cusp_order, dict(N=N, beta=b, D=D)) for N, b, D in cases]


SUITES = {
    "borcherds-eta": suite_borcherds_eta,
    "character-sum": suite_character_sum,
    "lift-identity": suite_lift_identity,
    "poincare-fourier": suite_poincare_fourier,
    "kloosterman-explicit": suite_kloosterman_explicit,
    "klf-constants": suite_klf_constants,
    "vq": suite_vq,
    "hurwitz": suite_hurwitz,
    "weil-relations": suite_weil_relations,
    "laplacian": suite_laplacian,
    "klf-invariance": suite_klf_invariance,
    "cusp-order": suite_cusp_order,
}


def run_suite(name: str, opts: SuiteOptions, cfg: RunConfig) -> list[Check]:
    """Run a named suite; checks may run in worker processes, the report is sorted by id."""
    if name not in SUITES:
        raise InvalidInput(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    tasks = [CheckTask(i, f, kw, cfg.precision_bits) for i, f, kw in SUITES[name](opts, cfg)]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    return sorted(results, key=lambda c: c.id)


# ---------------------------------------------------------------------------
# click commands


def _common(f):
    f = click.option("--precision", type=int, default=None, help="Working precision in bits (default $EISENKRON_PRECISION or 128).")(f)
    f = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")(f)
    f = click.option("--seed", type=int, default=0, help="Seed for randomized checks.")(f)
    return f


def _config(precision, fmt, seed, **extra) -> RunConfig:
    bits = precision if precision is not None else default_precision()
    return RunConfig(precision_bits=bits, fmt=fmt, seed=seed, **extra)


def _emit(cfg_fmt: str, payload: dict):
    click.echo(render(payload, cfg_fmt))


def _fail(exc: Exception, fmt: str = "json"):
    click.echo(render({"error": type(exc).__name__, "message": str(exc)}, fmt))
    sys.exit(2)


def _guarded(body):
    """Run body(); map input errors to exit status 2 with an error document."""
    try:
        body()
    except (InvalidInput, UnsupportedInput, ValueError, IndexError) as exc:
        _fail(exc)


@click.group()
@click.version_option(__version__)
def main():
    """Eisenstein series, Kronecker limit formulas and Borcherds products on Gamma_0(N)."""


@main.command()
@click.option("--level", type=int, required=True)
@click.option("--beta", type=int, required=True)
@click.option("--disc", type=int, required=True)
@_common
def classes(level, beta, disc, precision, fmt, seed):
    """Gamma_0(N)-classes of forms [aN, b, c] with b = beta mod 2N and discriminant D."""

    def body():
        cfg = _config(precision, fmt, seed)
        _require_index(level, beta, disc)
        with PrecisionContext(cfg.precision_bits):
            cl = enumerate_classes(DiscElement(Level(level), beta % (2 * level)), disc)
            rows = []
            for fc in cl.classes:
                row = {"rep": list(fc.rep.coeffs()), "stabilizer_order": fc.stabilizer_order if fc.stabilizer_order is not None else "infinite-cyclic"}
                if fc.automorph is not None:
                    row["automorph"] = [list(r) for r in fc.automorph]
                if disc < 0 and fc.rep.coeffs()[0] > 0:
                    row["heegner_point"] = heegner_point(fc.rep).z
                elif disc > 0:
                    a, b, c = fc.rep.coeffs()
                    r = mpmath.sqrt(disc)
                    row["geodesic_endpoints"] = [(-b - r) / (2 * a), (-b + r) / (2 * a)] if a else ["oo", Fraction(-c, b)]
                rows.append(row)
            payload = {"level": level, "beta": beta % (2 * level), "disc": disc, "count": len(rows), "classes": rows}
            if disc <= 0:
                payload["hurwitz"] = hurwitz_class_number(DiscElement(Level(level), beta % (2 * level)), Fraction(disc, 4 * level))
        _emit(cfg.fmt, payload)

    _guarded(body)


@main.command("class-number")
@click.option("--level", type=int, required=True)
@click.option("--beta", type=int, required=True)
@click.option("--disc", type=int, required=True)
@_common
def class_number(level, beta, disc, precision, fmt, seed):
    """Hurwitz class number H_N(beta, D/4N) as an exact rational."""

    def body():
        cfg = _config(precision, fmt, seed)
        _require_index(level, beta, disc)
        if disc > 0:
            raise InvalidInput("class numbers are defined for D <= 0")
        H = hurwitz_class_number(DiscElement(Level(level), beta % (2 * level)), Fraction(disc, 4 * level))
        _emit(cfg.fmt, {"level": level, "beta": beta % (2 * level), "disc": disc, "value": H, "est_error": "0"})

    _guarded(body)


@main.command()
@click.option("--level", type=int, required=True)
@click.option("--kind", type=click.Choice(["theta", "theta-d", "hauptmodul", "special"]), required=True)
@click.option("--c", "c", type=int, default=1, help="Atkin-Lehner index for theta, or d for theta-d.")
@click.option("--beta", type=int, default=0)
@click.option("--disc", type=int, default=None)
@click.option("--bound-order", type=int, default=10, help="q-expansion bound.")
@_common
def qexp(level, kind, c, beta, disc, bound_order, precision, fmt, seed):
    """Exact q-expansions: unary theta, theta_d, Hauptmoduln, Poincare special values."""

    def body():
        cfg = _config(precision, fmt, seed, bounds={"order": bound_order})
        if kind == "theta":
            exp = unary_theta(level, c, bound_order)
        elif kind == "theta-d":
            exp = theta_d(level, c, bound_order)
        elif kind == "hauptmodul":
            series = hauptmodul(level, bound_order)
            _emit(cfg.fmt, {"level": level, "kind": kind, "offset": series.offset, "coeffs": list(series.coeffs)})
            return
        else:
            if disc is None:
                raise InvalidInput("--disc is required for special values")
            _require_index(level, beta, disc)
            exp = poincare_special_value(PoincareIndex.from_disc(level, beta, disc)).expansion(bound_order)
        doc = json.loads(exp.to_json())
        _emit(cfg.fmt, {"kind": kind, **doc})

    _guarded(body)


@main.command()
@click.option("--level", type=int, required=True)
@click.option("--coeff", "coeffs", multiple=True, help="c:r pairs giving r theta^{w_c}; default 1:1.")
@click.option("--bound-order", type=int, default=20)
@_common
def borcherds(level, coeffs, bound_order, precision, fmt, seed):
    """Borcherds product data for a combination of theta^{w_c}."""

    def body():
        cfg = _config(precision, fmt, seed, bounds={"order": bound_order})
        weights = {}
        for item in coeffs or ("1:1",):
            c, _, r = item.partition(":")
            weights[int(c)] = Fraction(r or "1")
        data = borcherds_product(ThetaCombo.of(level, weights), order=bound_order)
        series = data.product_expansion(bound_order)
        payload = {
            "level": level,
            "weight": data.weight,
            "weyl_vectors": data.weyl_vectors,
            "cusp_orders": data.cusp_orders,
            "exponents": data.exponents,
            "eta_quotient": dict(data.eta_quotient.exponents) if data.eta_quotient else None,
            "expansion": {"offset": series.offset, "coeffs": list(series.coeffs)},
        }
        _emit(cfg.fmt, payload)

    _guarded(body)


@main.command()
@click.option("--level", type=int, required=True)
@click.option("--beta", type=int, default=0)
@click.option("--disc", type=int, default=None, help="Discriminant for the lift identity.")
@click.option("--cusp", type=int, default=None, help="Evaluate one parabolic series at the cusp 1/c.")
@click.option("--z", "z_text", default="0.1234+0.8765i")
@click.option("--s-re", type=float, default=1.3)
@click.option("--bound-coset", type=float, default=1500.0)
@click.option("--bound-lattice", type=float, default=3e5)
@_common
def eisenstein(level, beta, disc, cusp, z_text, s_re, bound_coset, bound_lattice, precision, fmt, seed):
    """Truncated Eisenstein series, or both sides of the lift identity when --disc is given."""

    def body():
        cfg = _config(precision, fmt, seed, bounds={"coset": bound_coset, "lattice": bound_lattice})
        z = _parse_complex(z_text)
        if s_re <= 1:
            raise InvalidInput("the series converge for Re s > 1")
        if cusp is not None:
            match = [cd for cd in cusp_data(level) if cd.c == cusp]
            if not match:
                raise InvalidInput(f"{cusp} does not divide {level}")
            val = parabolic_eisenstein(match[0], z, s_re, bound=bound_coset)
            _emit(cfg.fmt, {"level": level, "cusp": cusp, "s": s_re, "z": z, **_valued(val.value, val.est_tail)})
            return
        if disc is None:
            raise InvalidInput("give --disc or --cusp")
        _require_index(level, beta, disc)
        m = Fraction(disc, 4 * level)
        lat = lattice_sum(level, beta, m, z, s_re, bound=bound_lattice)
        eis = eisenstein_side(level, beta, m, z, s_re, bound=bound_coset)
        _emit(
            cfg.fmt,
            {
                "level": level,
                "beta": beta % (2 * level),
                "disc": disc,
                "s": s_re,
                "z": z,
                "lattice_sum": _valued(lat.value, lat.est_tail),
                "eisenstein_side": _valued(eis.value, eis.est_tail),
                "difference": abs(lat.value - eis.value),
            },
        )

    _guarded(body)


@main.command()
@click.option("--level", type=int, required=True)
@click.option("--beta", type=int, default=0)
@click.option("--disc", type=int, required=True)
@click.option("--z", "z_text", default="1i")
@click.option("--s-re", type=float, default=1.25)
@click.option("--s-im", type=float, default=0.0)
@click.option("--route", type=click.Choice(["direct", "fourier", "special"]), default="direct")
@click.option("--bound-c", type=int, default=200)
@click.option("--bound-d", type=float, default=4000.0)
@click.option("--bound-n", type=int, default=10)
@click.option("--bound-j", type=int, default=60)
@_common
def poincare(level, beta, disc, z_text, s_re, s_im, route, bound_c, bound_d, bound_n, bound_j, precision, fmt, seed):
    """Vector-valued Poincare series by coset sum, Fourier expansion, or its value at s = 0."""

    def body():
        cfg = _config(precision, fmt, seed, bounds={"c_cutoff": bound_c, "coset": bound_d, "j_cutoff": bound_j})
        _require_index(level, beta, disc)
        idx = PoincareIndex.from_disc(level, beta, disc)
        head = {"level": level, "beta": idx.beta, "m": idx.m}
        if route == "special":
            sv = poincare_special_value(idx)
            _emit(cfg.fmt, {**head, "kind": sv.kind, "combo": dict(sv.combo.coeffs) if sv.combo else None, "theta_d": sv.theta_d, "principal_part": {f"{b},{m}": v for (b, m), v in sv.principal_part.items()}})
            return
        tau = _parse_complex(z_text)
        s = complex(s_re, s_im)
        with PrecisionContext(cfg.precision_bits):
            if route == "direct":
                val = poincare_direct(idx, tau, s, c_bound=bound_c, d_bound=bound_d)
                comps, err = val.value, val.est_tail
            else:
                zr = "explicit" if (idx.beta, idx.m) == (0, 0) else "direct"
                comps, err = FourierCoefficientTable(idx, s, n_max=bound_n, j_cutoff=bound_j, c_cutoff=bound_c, zeta_route=zr).evaluate(tau)
        _emit(cfg.fmt, {**head, "s": s, "tau": tau, "route": route, "components": [_valued(complex(v), err) for v in comps]})

    _guarded(body)


@main.command()
@click.option("--kind", type=click.Choice(["parabolic", "hyperbolic", "elliptic"]), required=True)
@click.option("--level", type=int, required=True)
@click.option("--beta", type=int, default=0)
@click.option("--disc", type=int, default=None)
@click.option("--z", "z_values", multiple=True, help="Sample points (repeatable).")
@_common
def klf(kind, level, beta, disc, z_values, precision, fmt, seed):
    """Closed-form Kronecker limit data, optionally sampled at points z."""

    def body():
        cfg = _config(precision, fmt, seed)
        with PrecisionContext(cfg.precision_bits):
            if kind == "parabolic":
                res = parabolic_klf(level)
            else:
                if disc is None:
                    raise InvalidInput("--disc is required")
                _require_index(level, beta, disc)
                m = Fraction(disc, 4 * level)
                res = hyperbolic_klf(level, beta, m) if kind == "hyperbolic" else elliptic_klf(level, beta, m)
            payload = json.loads(res.to_json())
            if z_values:
                if res.kl_function is None:
                    # divisor data still goes out; the missing evaluator is the error
                    payload["error"] = "UnsupportedInput"
                    payload["message"] = "no closed-form evaluator at this level"
                    _emit(cfg.fmt, payload)
                    sys.exit(2)
                payload["samples"] = [{"z": _parse_complex(t), **_valued(res(_parse_complex(t)), 2.0 ** (-cfg.precision_bits // 2))} for t in z_values]
        _emit(cfg.fmt, payload)

    _guarded(body)


@main.command()
@click.argument("suite", type=click.Choice(sorted(SUITES)))
@click.option("--level", type=int, default=None)
@click.option("--beta", type=int, default=None)
@click.option("--disc", type=int, default=None)
@click.option("--s", "s_value", type=float, default=None)
@click.option("--q", type=int, default=None)
@click.option("--z", "z_text", default=None)
@click.option("--bound-order", type=int, default=None)
@click.option("--bound-c", type=int, default=None)
@click.option("--bound-j", type=int, default=None)
@click.option("--bound-coset", type=float, default=None)
@click.option("--bound-lattice", type=float, default=None)
@click.option("--jobs", type=int, default=1, help="Worker processes for independent checks.")
@_common
def verify(suite, level, beta, disc, s_value, q, z_text, bound_order, bound_c, bound_j, bound_coset, bound_lattice, jobs, precision, fmt, seed):
    """Run a verification suite; exit 1 if any check fails."""
    try:
        bounds = {"order": bound_order, "c_cutoff": bound_c, "j_cutoff": bound_j, "coset": bound_coset, "lattice": bound_lattice}
        cfg = _config(precision, fmt, seed, bounds=bounds, jobs=jobs)
        z = _parse_complex(z_text) if z_text else None
        opts = SuiteOptions(level=level, beta=beta, disc=disc, s=s_value, q=q, z=z)
        checks = run_suite(suite, opts, cfg)
    except (InvalidInput, ValueError) as exc:
        _fail(exc, "json")
        return
    ok = all(c.passed for c in checks)
    _emit(cfg.fmt, {"suite": suite, "passed": ok, "precision_bits": cfg.precision_bits, "seed": cfg.seed, "checks": [asdict(c) for c in checks]})
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
