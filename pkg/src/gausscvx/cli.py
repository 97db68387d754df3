"""Command-line front end emitting CSV tables, JSON reports, SVG figures.

Subcommands
-----------
specfun         scalar kernel table (t, g_p, J_p, psi, phi) as CSV
cylinder-table  per-measure table (a, k, R, s, phi, ps) as CSV
partition       argmin families of phi_k / s_k with refined crossings (JSON)
measure         Gaussian measure of a body, optional Monte Carlo cross-check
torsion         torsional rigidity of a body (exact when radial, else bound)
verify          run a named inequality check and write a JSON report
plot            self-contained SVG line charts of the profile functions

Exit codes: 0 = all checks passed, 1 = a verified violation, 2 = usage
error, 3 = numerical failure.  Counterexample searches exit 0 with the
witness inside the report (the violation is their finding, not a failure).

Bodies are given in the grammar of ``body.parse_body``:
``name:key=val,...`` composed with ``interp:lambda=x;<body>|<body>``.
Config files hold ``key = value`` lines; ``#`` starts a comment line.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import body as bd
from . import cylinder as cyl
from . import gaussmoments as gm
from . import specfun as sf
from . import torsion as tor
from . import verify as vf

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    """Run-wide knobs.  Every field has a default; the key=value config
    format round-trips all of them losslessly."""

    n: int = 2                # ambient dimension
    seed: int = 7             # the single seed feeding every randomized path
    rule_size: int = 0        # spherical-rule size; 0 = per-dimension default
    tol: float = 0.0          # tolerance override; 0 = per-check default
    grid: int = 99            # measure-grid resolution for tables
    t_points: int = 33        # interpolation-grid size for concavity checks
    out_dir: str = "."        # destination for reports and figures
    body: str = "ball:R=1"    # primary body (grammar: name:key=val,...)
    body2: str = ""           # second body for pair checks; "" = 1.5-dilate


def write_config(cfg: RunConfig, path) -> None:
    lines = ["# gausscvx run configuration"]
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        lines.append(f"{f.name} = {v!r}" if isinstance(v, float) else
                     f"{f.name} = {v}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_config(path, base: RunConfig | None = None) -> RunConfig:
    cfg = dataclasses.replace(base) if base else RunConfig()
    types = {f.name: f.type for f in dataclasses.fields(cfg)}
    casts = {"int": int, "float": float, "str": str}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in types:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        setattr(cfg, key, casts[types[key]](val))
    return cfg


def _rule(cfg: RunConfig, n: int | None = None) -> gm.SphereRule:
    return gm.sphere_rule(n or cfg.n, cfg.rule_size or None)


def _tol(cfg: RunConfig, default: float) -> float:
    return cfg.tol if cfg.tol > 0.0 else default


def _bodies(cfg: RunConfig) -> tuple[bd.SupportBody, bd.SupportBody]:
    K = bd.parse_body(cfg.body, cfg.n)
    L = bd.parse_body(cfg.body2, K.n) if cfg.body2 else bd.dilate(K, 1.5)
    return K, L


# ---------------------------------------------------------------------------
# output helpers


def _py(obj):
    """Recursively lower numpy scalars/arrays for JSON emission."""
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    return obj


def _report(check: str, lhs, rhs, margin, verdict: str, cfg: RunConfig,
            details=None) -> dict:
    rep = {
        "check": check,
        "lhs": _py(lhs),
        "rhs": _py(rhs),
        "margin": _py(margin),
        "verdict": verdict,
        "config": dataclasses.asdict(cfg),
        "version": __version__,
    }
    if details is not None:
        rep["details"] = _py(details)
    return rep


def _emit_json(cfg: RunConfig, name: str, report: dict, out=None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{name}.json").write_text(text + "\n", encoding="utf-8")
    print(text, file=out or sys.stdout)


def _emit_csv(rows, header: list[str], out_path: str | None) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{v:.12g}" if isinstance(v, float) else str(v)
                              for v in row))
    text = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# plain table/figure subcommands


def cmd_specfun(cfg: RunConfig, args) -> int:
    t = np.linspace(args.t_min, args.t_max, args.points)
    rows = [(float(ti), float(sf.g(args.p, ti)), float(sf.j_lower(args.p, ti)),
             float(sf.psi(ti)), float(sf.phi(abs(ti)))) for ti in t]
    _emit_csv(rows, ["t", "g", "j", "psi", "phi"], args.out)
    return EXIT_PASS


def cmd_cylinder_table(cfg: RunConfig, args) -> int:
    a = (np.arange(cfg.grid) + 1.0) / (cfg.grid + 1.0)
    rows = []
    for ai in a:
        for k in range(1, cfg.n + 1):
            rows.append((float(ai), k,
                         float(cyl.radius_of_measure(k, ai)),
                         float(cyl.perimeter_s(k, ai)),
                         float(cyl.phi_k(k, ai)),
                         float(cyl.ps_cylinder(k, ai))))
    _emit_csv(rows, ["a", "k", "R", "s", "phi", "ps"], args.out)
    return EXIT_PASS


def cmd_partition(cfg: RunConfig, args) -> int:
    table = cyl.partition(cfg.n)
    rep = {
        "n": cfg.n,
        "a": table.a,
        "phi_argmin": table.phi_argmin,
        "s_argmin": table.s_argmin,
        "mismatch_count": int(np.sum(table.mismatch)),
        "crossings_phi": [{"a": c[0], "k_left": c[1], "k_right": c[2]}
                          for c in table.crossings_phi],
        "crossings_s": [{"a": c[0], "k_left": c[1], "k_right": c[2]}
                        for c in table.crossings_s],
        "config": dataclasses.asdict(cfg),
        "version": __version__,
    }
    _emit_json(cfg, "partition", _py(rep))
    return EXIT_PASS


def cmd_measure(cfg: RunConfig, args) -> int:
    K = bd.parse_body(cfg.body, cfg.n)
    est = gm.measure(K, _rule(cfg, K.n))
    rep = {"body": cfg.body, "n": K.n, "value": est.value, "err": est.err,
           "method": est.method, "config": dataclasses.asdict(cfg),
           "version": __version__}
    if args.mc:
        mc = gm.mc_measure(K, args.mc, cfg.seed)
        rep.update(mc_value=mc.value, mc_err=mc.err,
                   consistent=bool(abs(mc.value - est.value)
                                   <= 3.0 * (mc.err + est.err)))
    _emit_json(cfg, "measure", _py(rep))
    if args.mc and not rep["consistent"]:
        return EXIT_NUMERICAL
    return EXIT_PASS


def cmd_torsion(cfg: RunConfig, args) -> int:
    if args.halfspace is not None:
        res = tor.torsion_halfspace(args.halfspace)
        body_label = f"halfspace(a={args.halfspace:g})"
    else:
        K = bd.parse_body(cfg.body, cfg.n)
        body_label = cfg.body
        if K.kind == "cylinder":
            k, R = K.params
            res = tor.torsion_radial(int(k), float(R),
                                     lambda r: np.ones_like(r), F_label="const1")
        else:
            res = tor.torsion_gauge_lower(K, gm.RayPolynomial.constant(1.0),
                                          F_label="const1")
    rep = {"body": body_label, "value": res.value, "err": res.err,
           "kind": res.kind, "config": dataclasses.asdict(cfg),
           "version": __version__}
    _emit_json(cfg, "torsion", _py(rep))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# SVG figures


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _svg_line_chart(path: Path, x: np.ndarray, curves, title: str,
                    ylim: tuple[float, float]) -> None:
    """Minimal self-contained SVG 1.1 line chart; values are clamped into
    ``ylim`` so diverging tails stay on the canvas."""
    W, H = 640.0, 420.0
    x0, x1, y0, y1 = 60.0, 620.0, 380.0, 24.0
    ylo, yhi = ylim

    def sx(v):
        return x0 + (v - x[0]) / (x[-1] - x[0]) * (x1 - x0)

    def sy(v):
        vv = min(max(v, ylo), yhi)
        return y0 + (vv - ylo) / (yhi - ylo) * (y1 - y0)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{W:g}" height="{H:g}" viewBox="0 0 {W:g} {H:g}">',
        f'<rect width="{W:g}" height="{H:g}" fill="white"/>',
        f'<text x="{(x0 + x1) / 2:.1f}" y="14" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{title}</text>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
    ]
    for tx in np.linspace(x[0], x[-1], 5):
        parts.append(f'<line x1="{sx(tx):.1f}" y1="{y0}" x2="{sx(tx):.1f}" '
                     f'y2="{y0 + 4}" stroke="black"/>')
        parts.append(f'<text x="{sx(tx):.1f}" y="{y0 + 16:.1f}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="10">{tx:.2f}</text>')
    for ty in np.linspace(ylo, yhi, 5):
        parts.append(f'<line x1="{x0 - 4}" y1="{sy(ty):.1f}" x2="{x0}" '
                     f'y2="{sy(ty):.1f}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 8:.1f}" y="{sy(ty) + 3:.1f}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="10">{ty:.2f}</text>')
    for i, (label, y) in enumerate(curves):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        pts = " ".join(f"{sx(xi):.2f},{sy(yi):.2f}" for xi, yi in zip(x, y))
        parts.append(f'<polyline fill="none" stroke="{color}" '
                     f'stroke-width="1.5" points="{pts}"/>')
        ly = y1 + 14 + 14 * i
        parts.append(f'<line x1="{x1 - 110:.1f}" y1="{ly:.1f}" '
                     f'x2="{x1 - 90:.1f}" y2="{ly:.1f}" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        parts.append(f'<text x="{x1 - 84:.1f}" y="{ly + 3:.1f}" '
                     f'font-family="sans-serif" font-size="11">{label}</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")


def cmd_plot(cfg: RunConfig, args) -> int:
    if cfg.n < 2:
        raise bd.BodyError("figures need n >= 2")
    a = np.linspace(0.01, 0.99, 197)
    phi1 = np.asarray(cyl.phi_k(1, a))
    phi2 = np.asarray(cyl.phi_k(2, a))
    s1 = np.asarray(cyl.perimeter_s(1, a))
    s2 = np.asarray(cyl.perimeter_s(2, a))
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    figures = {
        "phi12": (a, [("phi1", phi1), ("phi2", phi2)],
                  "profile growth rates phi_1, phi_2",
                  (-3.0, float(max(phi1.max(), phi2.max())))),
        "s12": (a, [("s1", s1), ("s2", s2)],
                "perimeter densities s_1, s_2",
                (0.0, float(max(s1.max(), s2.max())) * 1.05)),
        "phidiff": (a, [("phi1-phi2", phi1 - phi2)],
                    "difference phi_1 - phi_2",
                    (float(np.percentile(phi1 - phi2, 1.0)),
                     float((phi1 - phi2).max()) * 1.05)),
    }
    names = list(figures) if args.figure == "all" else [args.figure]
    written = []
    for name in names:
        x, curves, title, ylim = figures[name]
        p = out_dir / f"{name}.svg"
        _svg_line_chart(p, x, curves, title, ylim)
        written.append(str(p))
    print("\n".join(written))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# verification checks


def _verdict_exit(margin: float, tol: float) -> tuple[str, int]:
    if margin >= -tol:
        return "pass", EXIT_PASS
    return "violation", EXIT_VIOLATION


def _check_saint_venant(cfg: RunConfig) -> tuple[dict, int]:
    K = bd.parse_body(cfg.body, cfg.n)
    if K.kind != "cylinder":
        raise vf.VerificationError(
            "exact torsion needs a strip/ball/cylinder body")
    k, R = K.params
    lhs = tor.torsion_radial(int(k), float(R), lambda r: np.ones_like(r),
                             F_label="const1")
    a = float(sf.j_lower(k - 1, R) / sf.j_total(k - 1))
    rhs = tor.torsion_halfspace(a)
    tol = _tol(cfg, 1e-6) * rhs.value
    margin = rhs.value - lhs.value
    verdict, code = _verdict_exit(margin, tol)
    rep = _report("saint-venant", lhs.value, rhs.value, margin, verdict, cfg,
                  details={"a": a, "lhs_err": lhs.err, "rhs_err": rhs.err})
    return rep, code


def _concavity_common(cfg: RunConfig, transform: str) -> tuple[dict, int]:
    K, L = _bodies(cfg)
    rep = vf.concavity_check(transform, K, L, n_t=cfg.t_points,
                             rule=_rule(cfg, K.n))
    j = int(np.argmax(rep.second_diffs - rep.budget))
    verdict = {"concave_within_tol": "pass", "violation": "violation",
               "inconclusive": "inconclusive"}[rep.verdict]
    code = {"pass": EXIT_PASS, "violation": EXIT_VIOLATION,
            "inconclusive": EXIT_NUMERICAL}[verdict]
    out = _report(transform, rep.second_diffs[j], rep.budget[j],
                  -rep.worst_excess, verdict, cfg,
                  details={"pair": rep.pair, "t_grid": rep.t_grid,
                           "measures": rep.measures,
                           "second_diffs": rep.second_diffs,
                           "budget": rep.budget})
    return out, code


def _check_ehrhard(cfg: RunConfig) -> tuple[dict, int]:
    return _concavity_common(cfg, "psi_inv")


def _check_conjecture(cfg: RunConfig) -> tuple[dict, int]:
    return _concavity_common(cfg, "conjecture_F")


def _check_weak(cfg: RunConfig) -> tuple[dict, int]:
    return _concavity_common(cfg, "weak_F")


def _check_max_power(cfg: RunConfig) -> tuple[dict, int]:
    K, L = _bodies(cfg)
    pb = vf.max_power(K, L, n_t=cfg.t_points, rule=_rule(cfg, K.n))
    rhs = 1.0 / K.n
    tol = _tol(cfg, 1e-6) + pb.width
    margin = pb.value - rhs
    verdict, code = _verdict_exit(margin, tol)
    rep = _report("max-power", pb.value, rhs, margin, verdict, cfg,
                  details={"bracket": [pb.lo, pb.hi], "width": pb.width})
    return rep, code


def _check_gauss_main(cfg: RunConfig) -> tuple[dict, int]:
    K, L = _bodies(cfg)
    rec = vf.gauss_main_bound(K, rule=_rule(cfg, K.n))
    pb = vf.max_power(K, L, n_t=cfg.t_points, rule=_rule(cfg, K.n))
    tol = _tol(cfg, 1e-6) + pb.width
    margin = pb.value - rec["bound"]
    verdict, code = _verdict_exit(margin, tol)
    rep = _report("gauss-main", rec["bound"], pb.value, margin, verdict, cfg,
                  details=rec)
    return rep, code


def _check_cor_t1(cfg: RunConfig) -> tuple[dict, int]:
    K, L = _bodies(cfg)
    rec = vf.corT1_bound(K, rule=_rule(cfg, K.n))
    pb = vf.max_power(K, L, n_t=cfg.t_points, rule=_rule(cfg, K.n))
    tol = _tol(cfg, 1e-6) + pb.width
    margin = pb.value - rec["value"]
    verdict, code = _verdict_exit(margin, tol)
    rep = _report("cor-t1", rec["value"], pb.value, margin, verdict, cfg,
                  details={"torsion": rec["torsion"].value,
                           "torsion_kind": rec["torsion_kind"],
                           "ex2": rec["ex2"]})
    return rep, code


def _check_minkowski_first(cfg: RunConfig) -> tuple[dict, int]:
    K, L = _bodies(cfg)
    rec = vf.minkowski_first_check(K, L, rule=_rule(cfg, K.n))
    tol = _tol(cfg, 3.0 * rec["lhs_err"] + 1e-8)
    verdict, code = _verdict_exit(rec["slack"], tol)
    rep = _report("minkowski-first", rec["lhs"], rec["rhs"], rec["slack"],
                  verdict, cfg, details=rec)
    return rep, code


def _check_brascamp_lieb(cfg: RunConfig) -> tuple[dict, int]:
    K = bd.parse_body(cfg.body, cfg.n)
    mode = "gaussian" if K.n == 1 else "gaussian_even_half"
    if mode == "gaussian":
        f = vf.MultiPoly.coord(K.n, 0)
    else:
        last = vf.MultiPoly.coord(K.n, K.n - 1)
        f = last * last
    rec = vf.brascamp_lieb_check(K, f, mode, rule=_rule(cfg, K.n))
    tol = _tol(cfg, 3.0 * rec["err"] + 1e-8)
    verdict, code = _verdict_exit(rec["slack"], tol)
    rep = _report("brascamp-lieb", rec["var"], rec["bound"], rec["slack"],
                  verdict, cfg, details=rec)
    return rep, code


def _check_moments(cfg: RunConfig) -> tuple[dict, int]:
    K = bd.parse_body(cfg.body, cfg.n)
    rec = vf.moment_inequality_suite(K, rule=_rule(cfg, K.n))
    worst = min(rec["margins"].values())
    tol = _tol(cfg, 3.0 * rec["err"] + 1e-8)
    verdict, code = _verdict_exit(worst, tol)
    rep = _report("moments", worst, 0.0, worst, verdict, cfg, details=rec)
    return rep, code


def _check_alpha_halfspace(cfg: RunConfig) -> tuple[dict, int]:
    rec = vf.alpha_halfspace(0.3)
    margin = _tol(cfg, 1e-8) - abs(rec["diff"])
    verdict, code = _verdict_exit(margin, 0.0)
    rep = _report("alpha-halfspace", rec["quadrature"], rec["closed"],
                  margin, verdict, cfg, details=rec)
    return rep, code


def _check_s_inequality(cfg: RunConfig) -> tuple[dict, int]:
    K = bd.parse_body(cfg.body, cfg.n)
    rec = vf.s_inequality_check(K, rule=_rule(cfg, K.n))
    worst = min(r["margin"] for r in rec["rows"])
    tol = _tol(cfg, 3.0 * max(r["err"] for r in rec["rows"]) + 1e-8)
    verdict, code = _verdict_exit(worst, tol)
    rep = _report("s-inequality", worst, 0.0, worst, verdict, cfg, details=rec)
    return rep, code


def _check_propgauss(cfg: RunConfig) -> tuple[dict, int]:
    K = bd.parse_body(cfg.body, cfg.n)
    u = vf.MultiPoly.abs_sq(K.n) * 0.5
    rec = vf.propgauss_check(K, u, rule=_rule(cfg, K.n))
    tol = _tol(cfg, 3.0 * rec["err"] + 1e-9)
    verdict, code = _verdict_exit(rec["slack"], tol)
    rep = _report("propgauss", rec["lhs"], rec["rhs"], rec["slack"],
                  verdict, cfg, details=rec)
    return rep, code


def _counterexample_family(cfg: RunConfig, transform: str):
    n = cfg.n
    if transform == "phi_inv":
        ws = np.geomspace(0.2, 2.0, 4)
        rs = np.geomspace(0.3, 2.5, 4)
        fam = [(bd.strip(w, n), bd.ball(R, n)) for w in ws for R in rs]
        fam += [(bd.ball(r1, n), bd.ball(r2, n))
                for r1 in rs for r2 in rs if r2 > r1]
        fam += [(bd.strip(w1, n), bd.strip(w2, n))
                for w1 in ws for w2 in ws if w2 > w1]
        return fam
    table = cyl.partition(n)
    if not np.any(table.mismatch):
        return [(bd.ball(0.5, n), bd.ball(3.0, n))]
    a_mis = table.a[table.mismatch]
    lo = max(float(a_mis[0]) - 0.02, 0.01)
    hi = min(float(a_mis[-1]) + 0.02, 0.99)
    k = int(table.phi_argmin[table.mismatch][0])
    return [(bd.cylinder(k, float(cyl.radius_of_measure(k, lo)), n),
             bd.cylinder(k, float(cyl.radius_of_measure(k, hi)), n)),
            (bd.ball(0.5, n), bd.ball(3.0, n))]


def _check_counterexample(cfg: RunConfig, transform: str) -> tuple[dict, int]:
    fam = _counterexample_family(cfg, transform)
    rec = vf.counterexample_search(transform, fam, n_t=cfg.t_points,
                                   rule=_rule(cfg))
    found = rec["witness"] is not None
    lhs = rec["witness"]["second_diff"] if found else 0.0
    rhs = rec["witness"]["budget"] if found else 0.0
    rep = _report(f"counterexample-{transform.replace('_', '-')}",
                  lhs, rhs, lhs - rhs, "witness" if found else "none",
                  cfg, details=rec)
    return rep, EXIT_PASS


CHECKS = {
    "saint-venant": _check_saint_venant,
    "ehrhard": _check_ehrhard,
    "conjecture": _check_conjecture,
    "weak": _check_weak,
    "max-power": _check_max_power,
    "gauss-main": _check_gauss_main,
    "cor-t1": _check_cor_t1,
    "minkowski-first": _check_minkowski_first,
    "brascamp-lieb": _check_brascamp_lieb,
    "moments": _check_moments,
    "alpha-halfspace": _check_alpha_halfspace,
    "s-inequality": _check_s_inequality,
    "propgauss": _check_propgauss,
    "counterexample-phi-inv": lambda c: _check_counterexample(c, "phi_inv"),
    "counterexample-bad-func": lambda c: _check_counterexample(c, "bad_func"),
}


def cmd_verify(cfg: RunConfig, args) -> int:
    if args.check not in CHECKS:
        print(f"unknown check {args.check!r}; choose from "
              f"{', '.join(sorted(CHECKS))}", file=sys.stderr)
        return EXIT_USAGE
    rep, code = CHECKS[args.check](cfg)
    _emit_json(cfg, args.check, rep)
    return code


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file read first")
    p.add_argument("--n", type=int, help="ambient dimension")
    p.add_argument("--seed", type=int, help="seed for randomized paths")
    p.add_argument("--rule-size", type=int, dest="rule_size",
                   help="spherical-rule size override")
    p.add_argument("--tol", type=float, help="tolerance override")
    p.add_argument("--grid", type=int, help="table grid resolution")
    p.add_argument("--t-points", type=int, dest="t_points",
                   help="interpolation grid size")
    p.add_argument("--out-dir", dest="out_dir", help="output directory")
    p.add_argument("--body", help="primary body string")
    p.add_argument("--body2", help="secondary body string")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gausscvx",
        description="Gaussian-convexity diagnostics: tables, checks, figures")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("specfun", help="scalar kernel table (CSV)")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--points", type=int, default=31)
    p.add_argument("--out", help="CSV destination (default stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_specfun)

    p = sub.add_parser("cylinder-table", help="per-measure profile table (CSV)")
    p.add_argument("--out", help="CSV destination (default stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_cylinder_table)

    p = sub.add_parser("partition", help="argmin families and crossings (JSON)")
    _add_common(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("measure", help="Gaussian measure of a body (JSON)")
    p.add_argument("--mc", type=int, default=0,
                   help="Monte Carlo cross-check sample count")
    _add_common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("torsion", help="torsional rigidity (JSON)")
    p.add_argument("--halfspace", type=float, default=None,
                   help="half-space measure instead of a body")
    _add_common(p)
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("verify", help="run a named inequality check (JSON)")
    p.add_argument("--check", required=True,
                   help=f"one of: {', '.join(sorted(CHECKS))}")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="SVG figures of the profile functions")
    p.add_argument("--figure", default="all",
                   choices=["phi12", "s12", "phidiff", "all"])
    _add_common(p)
    p.set_defaults(func=cmd_plot)

    return ap


def _build_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = read_config(args.config, base=cfg)
    for f in dataclasses.fields(cfg):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = _build_config(args)
        return args.func(cfg, args)
    except (bd.BodyError, sf.DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (gm.QuadratureFailure, tor.TorsionFailure, cyl.NumericalFailure,
            vf.VerificationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
