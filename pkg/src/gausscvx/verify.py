"""Inequality-verification harness.

Concavity of transformed Gaussian measures along Minkowski interpolations,
estimation of the largest concavity power, the correlated-moment upper
bound with its closed-form optimizer, torsion-based lower bounds, and the
moment/variance inequality suite.  Every verdict carries an explicit
numerical error budget so that "holds", "fails" and "cannot tell" are all
falsifiable outcomes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import body as bd
from . import cylinder as cyl
from . import gaussmoments as gm
from . import specfun as sf
from . import torsion as tor


class VerificationError(RuntimeError):
    """A check could not be evaluated as posed (bad mode, missing oracle)."""


# ---------------------------------------------------------------------------
# dense multivariate polynomials (caller-side symbolic expansion)


def _prune(terms: dict) -> dict:
    return {m: c for m, c in terms.items() if c != 0.0}


@dataclass(frozen=True)
class MultiPoly:
    """Polynomial on R^n stored as {exponent tuple: coefficient}.

    Supports the ring operations plus the differential operators needed by
    the variance and Hessian checks; ``to_ray`` lowers the polynomial to
    its per-direction radial profile for spherical-rule integration.
    """

    n: int
    terms: dict

    # -- constructors ------------------------------------------------------
    @staticmethod
    def constant(n: int, c: float) -> "MultiPoly":
        c = float(c)
        return MultiPoly(n, {(0,) * n: c} if c != 0.0 else {})

    @staticmethod
    def coord(n: int, i: int) -> "MultiPoly":
        if not 0 <= i < n:
            raise VerificationError("coordinate index out of range")
        e = [0] * n
        e[i] = 1
        return MultiPoly(n, {tuple(e): 1.0})

    @staticmethod
    def abs_sq(n: int) -> "MultiPoly":
        """|x|^2."""
        t = {}
        for i in range(n):
            e = [0] * n
            e[i] = 2
            t[tuple(e)] = 1.0
        return MultiPoly(n, t)

    # -- ring operations ---------------------------------------------------
    def __add__(self, other: "MultiPoly | float") -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.n, other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0.0) + c
        return MultiPoly(self.n, _prune(t))

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly | float") -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.n, other)
        return self + (-other)

    def __mul__(self, other: "MultiPoly | float") -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = float(other)
            return MultiPoly(self.n, _prune({m: c * v for m, v in self.terms.items()}))
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0.0) + c1 * c2
        return MultiPoly(self.n, _prune(t))

    __rmul__ = __mul__

    # -- calculus ----------------------------------------------------------
    def diff(self, i: int) -> "MultiPoly":
        t = {}
        for m, c in self.terms.items():
            if m[i] > 0:
                e = list(m)
                e[i] -= 1
                t[tuple(e)] = t.get(tuple(e), 0.0) + c * m[i]
        return MultiPoly(self.n, _prune(t))

    def grad_sq(self) -> "MultiPoly":
        out = MultiPoly(self.n, {})
        for i in range(self.n):
            d = self.diff(i)
            out = out + d * d
        return out

    def laplacian(self) -> "MultiPoly":
        out = MultiPoly(self.n, {})
        for i in range(self.n):
            out = out + self.diff(i).diff(i)
        return out

    def euler(self) -> "MultiPoly":
        """<x, grad f>."""
        out = MultiPoly(self.n, {})
        for i in range(self.n):
            out = out + MultiPoly.coord(self.n, i) * self.diff(i)
        return out

    def hessian_frob_sq(self) -> "MultiPoly":
        out = MultiPoly(self.n, {})
        for i in range(self.n):
            for j in range(self.n):
                d = self.diff(i).diff(j)
                out = out + d * d
        return out

    # -- queries -----------------------------------------------------------
    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    @property
    def is_even(self) -> bool:
        return all(sum(m) % 2 == 0 for m in self.terms)

    def __call__(self, x) -> np.ndarray | float:
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(len(pts))
        for m, c in self.terms.items():
            mono = np.full(len(pts), c)
            for i, e in enumerate(m):
                if e:
                    mono = mono * pts[:, i] ** e
            out += mono
        return float(out[0]) if np.ndim(x) == 1 else out

    def to_ray(self) -> gm.RayPolynomial:
        """Radial profile: f(t u) = sum_d (sum_{|m|=d} c_m u^m) t^d."""
        if not self.terms:
            return gm.RayPolynomial.constant(0.0)
        deg = self.degree
        by_deg: dict = {}
        for m, c in self.terms.items():
            by_deg.setdefault(sum(m), []).append((m, c))

        def cf(dirs):
            out = np.zeros((len(dirs), deg + 1))
            for d, terms in by_deg.items():
                acc = np.zeros(len(dirs))
                for m, c in terms:
                    mono = np.full(len(dirs), c)
                    for i, e in enumerate(m):
                        if e:
                            mono = mono * dirs[:, i] ** e
                    acc += mono
                out[:, d] = acc
            return out

        return gm.RayPolynomial(deg, cf)


def random_even_quartic(n: int, rng: np.random.Generator,
                        scale: float = 1.0) -> MultiPoly:
    """Random even polynomial of total degree 4 (nonzero quartic part)."""
    terms: dict = {}
    for deg in (2, 4):
        for combo in itertools.combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in combo:
                e[i] += 1
            terms[tuple(e)] = float(rng.normal(0.0, scale))
    return MultiPoly(n, _prune(terms))


# ---------------------------------------------------------------------------
# measure transforms


@dataclass(frozen=True)
class MeasureTransform:
    """A C^1 increasing reparametrization a -> F(a) of measures in (0,1)."""

    name: str
    value: "callable"
    slope: "callable"


def _power_transform(p: float) -> MeasureTransform:
    p = float(p)
    if p == 0.0:
        return MeasureTransform(
            "power:0", lambda a: np.log(np.asarray(a, dtype=float)),
            lambda a: 1.0 / np.asarray(a, dtype=float))
    s = 1.0 if p > 0 else -1.0
    return MeasureTransform(
        f"power:{p:g}",
        lambda a: s * np.asarray(a, dtype=float) ** p,
        lambda a: abs(p) * np.asarray(a, dtype=float) ** (p - 1.0))


def measure_transform(spec, n: int) -> MeasureTransform:
    """Resolve a transform from a name, a power tag, or a transform object."""
    if isinstance(spec, MeasureTransform):
        return spec
    if hasattr(spec, "slope") and (hasattr(spec, "value") or callable(spec)):
        value = spec.value if hasattr(spec, "value") else spec
        return MeasureTransform(getattr(spec, "name", "custom"),
                                value, spec.slope)
    name = str(spec)
    if name.startswith("power:"):
        return _power_transform(float(name.split(":", 1)[1]))
    if name == "psi_inv":
        return MeasureTransform(
            name, sf.psi_inv,
            lambda a: np.sqrt(2.0 * np.pi) * np.exp(sf.psi_inv(a) ** 2 / 2.0))
    if name == "phi_inv":
        return MeasureTransform(
            name, sf.phi_inv,
            lambda a: np.sqrt(np.pi / 2.0) * np.exp(sf.phi_inv(a) ** 2 / 2.0))
    if name == "conjecture_F":
        t = cyl.conjecture_transform(n)
        return MeasureTransform(name, t, t.slope)
    if name == "weak_F":
        t = cyl.weak_transform(n)
        return MeasureTransform(name, t, t.slope)
    if name == "bad_func":
        t = cyl.bad_transform(n)
        return MeasureTransform(name, t.value, t.slope)
    raise VerificationError(f"unknown transform {name!r}")


# ---------------------------------------------------------------------------
# concavity along Minkowski interpolations


@dataclass(frozen=True)
class ConcavityReport:
    transform: str
    pair: tuple
    t_grid: np.ndarray
    measures: np.ndarray
    measure_errs: np.ndarray
    transformed: np.ndarray
    second_diffs: np.ndarray
    budget: np.ndarray
    verdict: str

    @property
    def min_second_diff(self) -> float:
        return float(np.min(self.second_diffs))

    @property
    def max_second_diff(self) -> float:
        return float(np.max(self.second_diffs))

    @property
    def worst_excess(self) -> float:
        """Largest (second diff - budget); <= 0 means concave within tol."""
        return float(np.max(self.second_diffs - self.budget))


def _uniform_grid(grid, n_t: int) -> np.ndarray:
    if grid is None:
        grid = (np.arange(n_t) + 1.0) / (n_t + 1.0)
    t = np.asarray(grid, dtype=float)
    if t.ndim != 1 or len(t) < 9:
        raise VerificationError("need a 1-D grid with at least 9 points")
    if np.any(t <= 0.0) or np.any(t >= 1.0):
        raise VerificationError("grid must lie strictly inside (0,1)")
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        raise VerificationError("grid must be uniform")
    return t


def _path_measures(K, L, t, rule):
    ests = [gm.measure(bd.interpolate(K, L, ti), rule) for ti in t]
    a = np.array([e.value for e in ests])
    aerr = np.array([e.err for e in ests])
    return a, aerr


def _second_diffs(t, a, aerr, tr: MeasureTransform):
    F = np.asarray(tr.value(a), dtype=float)
    slope = np.abs(np.asarray(tr.slope(a), dtype=float))
    dt = float(t[1] - t[0])
    d2 = (F[2:] - 2.0 * F[1:-1] + F[:-2]) / dt**2
    node = aerr * slope
    stencil = np.maximum(node[2:], np.maximum(node[1:-1], node[:-2]))
    # 4 = worst-case stencil weight sum; the eps term absorbs cancellation
    # in the transformed values themselves
    rounding = 4.0 * np.finfo(float).eps * np.max(np.abs(F))
    budget = (4.0 * stencil + rounding) / dt**2
    return F, d2, budget


def _verdict(d2: np.ndarray, budget: np.ndarray) -> str:
    if np.any(d2 > 5.0 * budget):
        return "violation"
    if np.all(d2 <= budget):
        return "concave_within_tol"
    return "inconclusive"


def concavity_check(transform, K: bd.SupportBody, L: bd.SupportBody,
                    grid=None, n_t: int = 33,
                    rule: gm.SphereRule | None = None) -> ConcavityReport:
    """Second-difference concavity test of F(gamma((1-t)K + tL)).

    verdict "violation" requires a second difference above 5x the budget;
    "concave_within_tol" requires all of them at or below the budget.
    """
    if K.n != L.n:
        raise VerificationError("dimension mismatch")
    tr = measure_transform(transform, K.n)
    t = _uniform_grid(grid, n_t)
    a, aerr = _path_measures(K, L, t, rule)
    F, d2, budget = _second_diffs(t, a, aerr, tr)
    return ConcavityReport(
        transform=tr.name, pair=(K.label, L.label), t_grid=t,
        measures=a, measure_errs=aerr, transformed=F,
        second_diffs=d2, budget=budget, verdict=_verdict(d2, budget),
    )


# ---------------------------------------------------------------------------
# largest concavity power


@dataclass(frozen=True)
class PowerBracket:
    value: float        # bracket midpoint
    lo: float           # largest power that passed
    hi: float           # smallest power that failed (or hi bound)
    width: float
    grid_size: int


def max_power(K: bd.SupportBody, L: bd.SupportBody, grid=None, n_t: int = 33,
              rule: gm.SphereRule | None = None, lo: float = -4.0,
              hi: float = 8.0, iters: int = 30) -> PowerBracket:
    """Bisect for the largest p with sign(p) gamma(K_t)^p concave on the grid.

    Measures along the path are computed once; each candidate power is then
    an arithmetic re-test, so 30 bisection steps cost one path evaluation.
    """
    if K.n != L.n:
        raise VerificationError("dimension mismatch")
    t = _uniform_grid(grid, n_t)
    a, aerr = _path_measures(K, L, t, rule)

    def concave_ok(p: float) -> bool:
        _, d2, budget = _second_diffs(t, a, aerr, _power_transform(p))
        return bool(np.all(d2 <= budget))

    if not concave_ok(lo):
        return PowerBracket(lo, lo, lo, 0.0, len(t))
    if concave_ok(hi):
        return PowerBracket(hi, hi, hi, 0.0, len(t))
    p_lo, p_hi = lo, hi
    for _ in range(iters):
        mid = 0.5 * (p_lo + p_hi)
        if concave_ok(mid):
            p_lo = mid
        else:
            p_hi = mid
    return PowerBracket(0.5 * (p_lo + p_hi), p_lo, p_hi, p_hi - p_lo, len(t))


# ---------------------------------------------------------------------------
# the correlated-moment upper bound for the concavity power


def gauss_main_bound(K: bd.SupportBody, rule: gm.SphereRule | None = None,
                     n_sweep: int = 100) -> dict:
    """Closed-form optimized upper bound for the concavity power of K.

    With m = E||X||_K^2, V = Var ||X||_K^2, c = r(K)^2/(2m):

        bound = c (1-m)^2 / (1 - cV) + 1/(n - E|X|^2),

    attained at the unique stationary shift alpha* = m + (1/c - V)/(1-m).
    A sweep over 100 other shifts guards the closed form.
    """
    rule = rule or gm.sphere_rule(K.n)
    r = bd.inradius(K)
    if r is None or not np.isfinite(r):
        raise VerificationError("in-radius unavailable for this body")
    a = gm.measure(K, rule)
    ex2 = gm.ray_integral(K, gm.RayPolynomial.abs_x_power(2), rule).over(a)
    g2 = gm.ray_integral(K, gm.RayPolynomial.gauge_power(K, 2), rule).over(a)
    g4 = gm.ray_integral(K, gm.RayPolynomial.gauge_power(K, 4), rule).over(a)
    m = g2.value
    V = g4.value - m * m
    if not 0.0 < m < 1.0:
        raise gm.QuadratureFailure(f"gauge second moment {m:g} outside (0,1)")
    c = r * r / (2.0 * m)
    if not c * V < 1.0:
        raise gm.QuadratureFailure("variance term at the stability limit")
    tail = 1.0 / (K.n - ex2.value)
    alpha_star = m + (1.0 / c - V) / (1.0 - m)
    bound = c * (1.0 - m) ** 2 / (1.0 - c * V) + tail

    def objective(alpha):
        beta = alpha - m
        inner = (1.0 - m) * beta + V
        return (c * inner * inner - V) / (beta * beta) + tail

    beta_star = alpha_star - m
    mult = np.logspace(-2.0, 2.0, n_sweep // 2)
    sweep = objective(m + np.concatenate([beta_star * mult, -beta_star * mult]))
    sweep_max = float(np.max(sweep))
    if sweep_max > bound + 1e-9:
        raise VerificationError("shift sweep exceeded the closed-form maximum")
    return {
        "bound": float(bound),
        "alpha_star": float(alpha_star),
        "components": {
            "inradius": float(r), "gauge_m2": float(m), "gauge_var": float(V),
            "c": float(c), "ex2": float(ex2.value), "tail": float(tail),
            "measure": float(a.value), "sweep_max": sweep_max,
            "err": float(g2.err + g4.err + ex2.err + a.err),
        },
    }


def corT1_bound(K: bd.SupportBody, rule: gm.SphereRule | None = None) -> dict:
    """Torsion route to a concavity-power lower bound: 2 T(K) + 1/(n - E|X|^2).

    Round cylinders (and their strip/ball special cases) use the exact
    radial torsion; other bodies get the certified gauge lower bound.
    """
    if K.kind == "cylinder":
        k, R = K.params
        t_res = tor.torsion_radial(int(k), float(R), lambda r: np.ones_like(r),
                                   F_label="const1")
    else:
        t_res = tor.torsion_gauge_lower(K, gm.RayPolynomial.constant(1.0),
                                        F_label="const1")
    rule = rule or gm.sphere_rule(K.n)
    a = gm.measure(K, rule)
    ex2 = gm.ray_integral(K, gm.RayPolynomial.abs_x_power(2), rule).over(a)
    value = 2.0 * t_res.value + 1.0 / (K.n - ex2.value)
    return {"value": float(value), "torsion": t_res, "ex2": float(ex2.value),
            "torsion_kind": t_res.kind}


# ---------------------------------------------------------------------------
# first-variation (Minkowski) inequality


def minkowski_first_check(K: bd.SupportBody, L: bd.SupportBody,
                          rule: gm.SphereRule | None = None) -> dict:
    """First variation of gamma against the dimensional-power product bound.

    lhs = d/deps gamma(K + eps L);  rhs = (n - E|X|^2) a_K^(1-p) a_L^p with
    p = 1/(n - E|X|^2).  ``rhs_weak`` records the same product scaled by
    (1 - E|X|^2/n) instead, which is implied by rhs (it is smaller).
    """
    if K.n != L.n:
        raise VerificationError("dimension mismatch")
    rule = rule or gm.sphere_rule(K.n)
    aK = gm.measure(K, rule)
    aL = gm.measure(L, rule)
    ex2 = gm.ray_integral(K, gm.RayPolynomial.abs_x_power(2), rule).over(aK)
    lhs = gm.gamma_one(K, L, rule=rule)
    nm = K.n - ex2.value
    p = 1.0 / nm
    product = aK.value ** (1.0 - p) * aL.value ** p
    rhs = nm * product
    rhs_weak = (nm / K.n) * product
    return {
        "lhs": float(lhs.value), "lhs_err": float(lhs.err),
        "rhs": float(rhs), "slack": float(lhs.value - rhs),
        "rhs_weak": float(rhs_weak), "slack_weak": float(lhs.value - rhs_weak),
        "p": float(p), "ex2": float(ex2.value),
    }


# ---------------------------------------------------------------------------
# variance (Poincare-type) inequalities


def brascamp_lieb_check(K: bd.SupportBody, f: MultiPoly,
                        mode: str = "gaussian",
                        rule: gm.SphereRule | None = None) -> dict:
    """Var f <= c E|grad f|^2 over the normalized Gaussian measure on K.

    mode "gaussian": c = 1 for any convex K.  mode "gaussian_even_half":
    c = 1/2, requiring even f and symmetric K.
    """
    if mode not in ("gaussian", "gaussian_even_half"):
        raise VerificationError(f"unknown mode {mode!r}")
    if f.n != K.n:
        raise VerificationError("dimension mismatch")
    if mode == "gaussian_even_half":
        if not f.is_even:
            raise VerificationError("even-half mode requires an even f")
        if not K.symmetric:
            raise VerificationError("even-half mode requires a symmetric K")
    rule = rule or gm.sphere_rule(K.n)
    a = gm.measure(K, rule)
    ef = gm.ray_integral(K, f.to_ray(), rule).over(a)
    ef2 = gm.ray_integral(K, (f * f).to_ray(), rule).over(a)
    eg2 = gm.ray_integral(K, f.grad_sq().to_ray(), rule).over(a)
    var = ef2.value - ef.value ** 2
    const = 0.5 if mode == "gaussian_even_half" else 1.0
    bound = const * eg2.value
    err = ef2.err + 2.0 * abs(ef.value) * ef.err + const * eg2.err
    return {"mode": mode, "var": float(var), "bound": float(bound),
            "slack": float(bound - var), "err": float(err)}


def propgauss_check(K: bd.SupportBody, u: MultiPoly,
                    rule: gm.SphereRule | None = None) -> dict:
    """Hessian-energy inequality for even u on a convex body:

        E ||Hess u||_F^2  >=  E |grad u|^2 + (E Lu)^2 / (n - E|X|^2),

    Lu = Laplacian u - <x, grad u>.  Equality at u = |x|^2/2 on every body.
    """
    if not u.is_even:
        raise VerificationError("u must be even")
    if u.n != K.n:
        raise VerificationError("dimension mismatch")
    rule = rule or gm.sphere_rule(K.n)
    a = gm.measure(K, rule)
    hess = gm.ray_integral(K, u.hessian_frob_sq().to_ray(), rule).over(a)
    grad = gm.ray_integral(K, u.grad_sq().to_ray(), rule).over(a)
    ex2 = gm.ray_integral(K, gm.RayPolynomial.abs_x_power(2), rule).over(a)
    lu = gm.ray_integral(K, (u.laplacian() - u.euler()).to_ray(), rule).over(a)
    rhs = grad.value + lu.value ** 2 / (K.n - ex2.value)
    slack = hess.value - rhs
    err = hess.err + grad.err + 2.0 * abs(lu.value) * lu.err + ex2.err
    return {"lhs": float(hess.value), "rhs": float(rhs),
            "slack": float(slack), "mean_Lu": float(lu.value),
            "err": float(err)}


# ---------------------------------------------------------------------------
# moment functionals


def _alpha_from(n: int, m2: float, m4: float) -> float:
    return (n * (n - 1.0) - (2.0 * n + 1.0) * m2 + m4) / (n - m2) ** 2


def _beta_from(n: int, m2: float, m4: float) -> float:
    denom = 2.0 * m2 - (m4 - m2 * m2)
    if denom <= 0.0:
        raise gm.QuadratureFailure("fourth-moment margin vanished")
    return (n * n - 2.0 * (n + 1.0) * m2 + m4) / denom


def moment_inequality_suite(K: bd.SupportBody,
                            rule: gm.SphereRule | None = None,
                            eta_shifts=(0.3, 0.6, 0.85)) -> dict:
    """All scalar moment inequalities for a symmetric convex body.

    Margins are oriented so that >= 0 (up to quadrature error) means the
    inequality holds: cfm = (E|X|^2)^2 + 2 E|X|^2 - E|X|^4, ex2 = n - E|X|^2,
    dir2 = 1 - E<X,e_i>^2 per axis, alpha = 1 - alpha(K), beta = beta(K) + 1.
    The shifted-body directional test translates K by fractions of its
    in-radius and checks E<X,th>^2 + eta(a) (E<X,th>)^2 <= 1.
    """
    b = gm.moments_bundle(K, rule)
    n = K.n
    m2, m4 = b.m2.value, b.m4.value
    alpha = _alpha_from(n, m2, m4)
    beta = _beta_from(n, m2, m4)
    dir2 = [b.dir2(np.eye(n)[i]).value for i in range(n)]
    report = {
        "a": float(b.a.value),
        "m2": float(m2), "m4": float(m4),
        "alpha": float(alpha), "beta": float(beta),
        "margins": {
            "cfm": float(m2 * m2 + 2.0 * m2 - m4),
            "ex2": float(n - m2),
            "dir2": float(1.0 - max(dir2)),
            "alpha": float(1.0 - alpha),
            "beta": float(beta + 1.0),
        },
        "err": float(b.m2.err + b.m4.err + b.a.err),
        "shifted": [],
    }
    r = bd.inradius(K)
    if K.symmetric and r is not None and np.isfinite(r):
        theta = np.zeros(n)
        theta[0] = 1.0
        for frac in eta_shifts:
            KT = bd.translate(K, frac * r * theta)
            bt = gm.moments_bundle(KT, rule)
            d1 = bt.dir1(theta).value
            d2 = bt.dir2(theta).value
            margin = 1.0 - d2 - float(sf.eta(bt.a.value)) * d1 * d1
            report["shifted"].append({
                "shift": float(frac * r), "a": float(bt.a.value),
                "dir1": float(d1), "dir2": float(d2),
                "margin": float(margin),
            })
    return report


def alpha_halfspace(a: float) -> dict:
    """alpha of a half-space of measure a by two independent routes.

    Route 1 integrates the truncated one-dimensional moments; route 2 is
    the closed form -sqrt(2 pi) a b exp(b^2/2) with b the measure quantile
    (equivalently -eta(a)).  The moment combination entering alpha reduces
    to m4 - 3 m2 over (1 - m2)^2 in the ambient-free normal form, so the
    result is dimension-independent.

    At a = 1/2 both the numerator and the denominator vanish (the value 0
    is a removable singularity); the quadrature route is ill-conditioned
    in a neighbourhood of it and is refused rather than patched.
    """
    from scipy import integrate

    if not 0.0 < a < 1.0:
        raise VerificationError("need 0 < a < 1")
    b = float(sf.psi_inv(a))
    if abs(b) < 1e-4:
        raise VerificationError(
            "quadrature route ill-conditioned near a = 1/2; evaluate nearby")
    lo = b - 16.0

    def moment(j):
        val, _ = integrate.quad(
            lambda t: t**j * np.exp(-t * t / 2.0) / np.sqrt(2.0 * np.pi),
            lo, b, epsabs=1e-14, epsrel=1e-13, limit=200)
        return val

    mass = moment(0)
    m2 = moment(2) / mass
    m4 = moment(4) / mass
    quad_alpha = (m4 - 3.0 * m2) / (1.0 - m2) ** 2
    closed = -float(sf.eta(a))
    return {"a": float(a), "quantile": b, "quadrature": float(quad_alpha),
            "closed": closed, "diff": float(quad_alpha - closed)}


# ---------------------------------------------------------------------------
# dilation comparison against the matching strip


def s_inequality_check(K: bd.SupportBody, ts=(1.0, 1.2, 1.5, 2.0, 3.0),
                       rule: gm.SphereRule | None = None) -> dict:
    """gamma(tK) against the equal-measure strip's dilation, t >= 1.

    The reference strip half-width is matched to the quadrature value of
    gamma(K), so the t=1 margin is zero by construction.
    """
    if min(ts) < 1.0:
        raise VerificationError("dilation factors must be >= 1")
    rule = rule or gm.sphere_rule(K.n)
    a = gm.measure(K, rule)
    w = float(sf.phi_inv(a.value))
    rows = []
    for t in ts:
        at = gm.measure(bd.dilate(K, float(t)), rule)
        strip_val = float(sf.phi(t * w))
        rows.append({
            "t": float(t), "dilated": float(at.value), "strip": strip_val,
            "margin": float(at.value - strip_val), "err": float(at.err),
        })
    return {"a": float(a.value), "strip_halfwidth": w, "rows": rows}


# ---------------------------------------------------------------------------
# counterexample searches


def counterexample_search(transform, family, grid=None, n_t: int = 33,
                          rule: gm.SphereRule | None = None) -> dict:
    """Scan (K, L) pairs for a transformed-concavity violation.

    A hit is only reported as a witness after it reproduces at doubled
    quadrature resolution; otherwise the scan continues.  With no hit the
    report says so without asserting anything beyond this resolution.
    """
    pairs = list(family)
    if not pairs:
        raise VerificationError("empty family")
    n = pairs[0][0].n
    tr = measure_transform(transform, n)
    base_rule = rule or gm.sphere_rule(n)
    witness = None
    unconfirmed = []
    for idx, (K, L) in enumerate(pairs):
        rep = concavity_check(tr, K, L, grid=grid, n_t=n_t, rule=base_rule)
        if rep.verdict != "violation":
            continue
        fine = gm.sphere_rule(n, 2 * base_rule.size)
        rep2 = concavity_check(tr, K, L, grid=grid, n_t=n_t, rule=fine)
        j = int(np.argmax(rep2.second_diffs - 5.0 * rep2.budget))
        if rep2.verdict == "violation":
            witness = {
                "pair_index": idx, "labels": (K.label, L.label),
                "t": float(rep2.t_grid[j + 1]),
                "second_diff": float(rep2.second_diffs[j]),
                "budget": float(rep2.budget[j]),
                "coarse_second_diff": float(rep.second_diffs[j]),
            }
            break
        unconfirmed.append({"pair_index": idx, "labels": (K.label, L.label)})
    return {
        "transform": tr.name,
        "pairs_scanned": int(len(pairs) if witness is None
                             else witness["pair_index"] + 1),
        "witness": witness,
        "unconfirmed": unconfirmed,
        "message": ("witness confirmed at doubled resolution" if witness
                    else "none found at this resolution"),
    }
