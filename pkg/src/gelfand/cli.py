"""Command-line driver: named verification suites over the library, with
machine-readable reports.

Each suite runs a list of cases; a case records an identifier, the expected
and actual values, the tolerance it was judged at, and pass/fail.  Reports
are deterministic for a fixed configuration and seed (timings are only
filled in when asked for, so that byte-identical reruns stay byte-identical).

Exit codes: 0 all cases pass, 1 some case failed, 2 usage or configuration
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import dirlim, fock, nilpf, numerics, rootsys, symmpair, tables
from . import charring

REPORT_VERSION = "1"

# suite name -> short identity string describing what the suite verifies;
# copied into every case so reports are self-documenting
SUITE_ANCHORS = {
    "gamma": "weighted-central-moment-identity",
    "regnorms": "regular-function-norms",
    "fock-orthogonality": "coefficient-orthogonality-and-formal-degree",
    "fock-representation": "group-law-and-central-character",
    "pfaffian": "pfaffian-classification",
    "weyl": "weyl-dimension-vs-weight-count",
    "carcano": "multiplicity-free-polynomial-actions",
    "xstability": "highest-weight-set-stability",
    "ladders": "ladder-squares-cocycles-and-limit-pairing",
    "zonal": "zonal-projection-constants",
}


@dataclass
class Case:
    case_id: str
    status: str
    expected: str
    actual: str
    tolerance: str
    runtime_ms: float | None = None

    def as_dict(self, anchor):
        return {
            "case_id": self.case_id,
            "anchor": anchor,
            "status": self.status,
            "expected": self.expected,
            "actual": self.actual,
            "tolerance": self.tolerance,
            "runtime_ms": self.runtime_ms,
        }


@dataclass
class VerificationReport:
    suite: str
    anchor: str
    cases: list
    config: dict
    seed: int

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.cases)


class _Recorder:
    def __init__(self, timing: bool):
        self.cases = []
        self.timing = timing

    def check(self, case_id, ok, expected, actual, tolerance):
        self.cases.append(Case(
            case_id, "pass" if ok else "fail",
            str(expected), str(actual), str(tolerance),
        ))

    def run(self, case_id, expected, tolerance, thunk):
        start = time.perf_counter()
        try:
            ok, actual = thunk()
            status = "pass" if ok else "fail"
        except Exception as exc:  # a crashed case is a failed case
            status, actual = "fail", f"error: {exc}"
        case = Case(case_id, status, str(expected), str(actual), str(tolerance))
        if self.timing:
            case.runtime_ms = 1000 * (time.perf_counter() - start)
        self.cases.append(case)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _suite_gamma(cfg, rec):
    tol = 1e-10
    for k in range(cfg["max_k"] + 1):
        def thunk(k=k):
            quad, exact = numerics.gamma_moment(k)
            rel = abs(quad - float(exact)) / float(exact)
            return rel <= tol, f"{quad!r} (rel err {rel:.3e})"
        rec.run(f"gamma-moment-k{k}", str(Fraction(math.factorial(k), 2 ** k)),
                tol, thunk)


def _suite_regnorms(cfg, rec):
    tol = 1e-10
    for total in range(cfg["max_k"] + 1):
        for n in range(total + 1):
            k = total - n
            def thunk(n=n, k=k):
                exact, quad = fock.regular_norm_sq(n, k)
                rel = abs(quad - float(exact)) / float(exact)
                return rel <= tol, f"{quad!r} (rel err {rel:.3e})"
            rec.run(f"regular-norm-n{n}-k{k}",
                    str(Fraction(math.factorial(n + k), 2 ** (n + k))), tol, thunk)


def _suite_fock_orthogonality(cfg, rec):
    ts = cfg["t_values"]
    pairs = [((0,), (0,)), ((1,), (0,)), ((2,), (1,)), ((3,), (3,))]
    off_tol, diag_tol = 1e-8, 1e-6
    diag = {}
    for t in ts:
        for i, p in enumerate(pairs):
            for j, q in enumerate(pairs):
                if i < j:
                    def thunk(t=t, p=p, q=q):
                        val = abs(fock.coefficient_inner_product(t, p, q))
                        return val < off_tol, f"{val:.3e}"
                    rec.run(f"orthogonality-t{t}-{p}-{q}", "0", off_tol, thunk)
        for p in pairs:
            val = fock.coefficient_inner_product(t, p, p)
            diag[(t, p)] = val.real * abs(t)
            rec.check(f"diagonal-positive-t{t}-{p}", val.real > 0, "> 0",
                      f"{val.real:.6e}", "exact sign")
    values = list(diag.values())
    mean = sum(values) / len(values)
    spread = max(abs(v - mean) for v in values) / abs(mean)
    rec.check("formal-degree-constancy", spread <= diag_tol,
              f"relative spread <= {diag_tol}", f"{spread:.3e}", diag_tol)


def _suite_fock_representation(cfg, rec):
    t, cutoff = 1.0, cfg["cutoff"]
    tol = 1e-6
    g = fock.HeisenbergPoint(0.15, (0.3 + 0.4j,))
    h = fock.HeisenbergPoint(-0.4, (-0.3 - 0.4j,))

    def law():
        u = fock.fock_operator(1, t, g, cutoff).matrix
        v = fock.fock_operator(1, t, h, cutoff).matrix
        w = fock.fock_operator(1, t, fock.heis_mul(g, h), cutoff).matrix
        keep = [i for i, m in enumerate(fock.multi_indices(1, cutoff))
                if sum(m) <= cutoff // 2]
        res = float(np.linalg.norm((u @ v - w)[np.ix_(keep, keep)], 2))
        return res < tol, f"{res:.3e}"

    rec.run("representation-property", f"< {tol}", tol, law)

    def central():
        z = 0.77
        op = fock.fock_operator(1, t, fock.HeisenbergPoint(z, (0j,)), cutoff)
        expected = complex(math.cos(t * z), math.sin(t * z)) * np.eye(cutoff + 1)
        return bool(np.array_equal(op.matrix, expected)), "exact scalar matrix"

    rec.run("central-character-exact", "e^{itz} I exactly", "exact", central)

    def unitary():
        op = fock.fock_operator(1, t, g, cutoff)
        res = float(np.linalg.norm(op.matrix.conj().T @ op.matrix - np.eye(cutoff + 1)))
        return res < 1e-8, f"{res:.3e}"

    rec.run("unitarity", "< 1e-08", 1e-8, unitary)


def _suite_pfaffian(cfg, rec):
    spec = cfg.get("algebra")
    if spec:
        alg = tables.algebra(spec)
        poly = nilpf.pfaffian_polynomial(alg)
        rec.check(f"pfaffian-poly-{spec}", True, "computed", repr(poly.poly), "exact")
        rec.check(f"square-integrable-{spec}", True, "classified",
                  str(nilpf.is_generically_square_integrable(alg)), "exact")
        return
    from .exact import MultiPoly, det

    t = MultiPoly.variable(1, 0)
    for n in range(1, 5):
        def thunk(n=n):
            poly = nilpf.pfaffian_polynomial(nilpf.build_heisenberg(n, "C")).poly
            return poly == t ** n, repr(poly)
        rec.run(f"heisenberg-pfaffian-n{n}", f"t^{n}", "exact", thunk)

    import random as _random

    rng = _random.Random(cfg["seed"])
    for n in (4, 6, 8, 10):
        def thunk(n=n):
            m = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    x = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                    m[i][j], m[j][i] = x, -x
            return nilpf.pfaffian(m) ** 2 == det(m), "Pf^2 == det"
        rec.run(f"pfaffian-squares-to-det-{n}x{n}", "exact equality", "exact", thunk)

    def free3():
        alg = nilpf.build_free_two_step(3)
        return not nilpf.is_generically_square_integrable(alg), "Pf == 0"

    rec.run("free-two-step-3-not-square-integrable", "not square integrable",
            "exact", free3)

    def covariance():
        from .exact import det as _det

        alg = nilpf.build_heisenberg(2, "C")
        for _ in range(50):
            s = [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)]
            d = _det(s)
            if d != 0:
                break
        else:
            return False, "no invertible transform drawn"
        moved = nilpf.transform_v_basis(alg, s)
        lhs = nilpf.pfaffian_polynomial(moved).poly
        rhs = nilpf.pfaffian_polynomial(alg).poly.scale(d)
        return lhs == rhs, f"Pf scales by det = {d}"

    rec.run("basis-change-covariance", "Pf -> det(a) Pf", "exact", covariance)


def _suite_weyl(cfg, rec):
    bound = cfg["rank"]
    for family in ("A", "B", "C", "D"):
        for rank in range(1 if family != "D" else 2, bound + 1):
            rs = rootsys.build_root_system(family, rank)
            def thunk(rs=rs, family=family, rank=rank):
                for coeffs in _grid(rank, 2):
                    w = rootsys.DominantWeight(family, rank, coeffs)
                    total = sum(charring.weight_system(rs, w).values())
                    if total != rootsys.weyl_dimension(rs, w):
                        return False, f"mismatch at {coeffs}"
                return True, "all coefficient vectors <= 2 agree"
            rec.run(f"weyl-vs-weight-count-{family}{rank}", "exact agreement",
                    "exact", thunk)


def _grid(rank, bound):
    if rank == 0:
        yield ()
        return
    for head in range(bound + 1):
        for tail in _grid(rank - 1, bound):
            yield (head,) + tail


def _suite_carcano(cfg, rec):
    degree = cfg["degree"]
    row_id = cfg.get("row")
    jobs = []
    if row_id:
        jobs.append((row_id, cfg["rank"], cfg.get("rank2")))
    else:
        jobs = [("kac:1", 2, None), ("kac:2", 1, None), ("kac:3", 1, None),
                ("kac:5", 2, None), ("kac:6", 2, None), ("kac:8", 2, None)]
    for rid, rank, rank2 in jobs:
        def thunk(rid=rid, rank=rank, rank2=rank2):
            datum = tables.group_datum(rid, rank, rank2)
            ok, violation = charring.is_multiplicity_free_polynomial_action(datum, degree)
            return ok, "multiplicity free" if ok else f"violation {violation}"
        rec.run(f"multiplicity-free-{rid}-rank{rank}", "multiplicity free",
                f"degrees <= {degree}", thunk)
    if not row_id:
        def negative():
            datum = charring.GroupDatum(
                (charring.Factor(charring.GL, 2),),
                charring.Construction("dsum", parts=(
                    charring.Construction("standard", (0,)),
                    charring.Construction("standard", (0,)))),
                torus_mode="su", su_flags=(True,))
            ok, violation = charring.is_multiplicity_free_polynomial_action(datum, 1)
            return (not ok) and violation["degree"] == 1, f"violation {violation}"
        rec.run("negative-control-doubled-standard", "repeat in degree 1",
                "exact", negative)

        def sp_single():
            datum = tables.group_datum("kac:3", 2)
            for q in range(degree + 1):
                dec = charring.sym_power_decompose(datum, q)
                if len(dec.entries) != 1 or dec.entries[0][1] != 1:
                    return False, f"degree {q} not a single irreducible"
                label = dec.entries[0][0][0]
                if label != tuple([q] + [0]):
                    return False, f"degree {q} highest weight {label}"
            return True, "single irreducible with linear highest weight"
        rec.run("sp-degree-powers-single-irrep", "one constituent per degree",
                "exact", sp_single)


def _suite_xstability(cfg, rec):
    degree = cfg["degree"]
    row_id = cfg.get("row")
    if row_id:
        jobs = [(row_id, cfg["rank"], cfg.get("rank2"))]
    else:
        jobs = [("jaw:2", 2, 3), ("jaw:3", 2, 3), ("jaw:5a", 6, 8)]
    for rid, small, big in jobs:
        if big is None:
            raise ConfigError("stability needs two ranks (--rank n,m)")
        for d in range(degree + 1):
            def thunk(rid=rid, small=small, big=big, d=d):
                a = tables.group_datum(rid, small)
                b = tables.group_datum(rid, big)
                ok, missing = charring.check_stability(a, b, d)
                return ok, "stable" if ok else f"missing {missing}"
            rec.run(f"stability-{rid}-{small}to{big}-d{d}", "contained", "exact", thunk)


def _suite_ladders(cfg, rec):
    degree = cfg["degree"]

    def un_exact():
        for d in range(degree + 1):
            L = dirlim.un_polynomial_ladder(d)
            for m in L.levels:
                for n in L.levels:
                    if m >= n:
                        ok, res = dirlim.verify_commuting_square(L, m, n)
                        if not ok or res != 0:
                            return False, f"residual {res} at d={d}, ({m},{n})"
            ok, res = dirlim.verify_cocycle(L)
            if not ok or res != 0:
                return False, f"cocycle residual {res} at d={d}"
            for m in L.levels:
                for n in L.levels:
                    if m > n and L.csq(m, n) != dirlim.un_csq_by_enumeration(d, n, m):
                        return False, f"routes disagree at d={d}, ({m},{n})"
        return True, "all residuals exactly 0; both constant routes agree"

    rec.run("unitary-polynomial-ladder", "residual 0 exactly", "exact", un_exact)

    def sphere_quad():
        worst = 0.0
        for d in range(1, degree + 1):
            L = dirlim.sphere_ladder(d, levels=(2, 3, 4, 5), method="quadrature")
            ok, res = dirlim.verify_cocycle(L)
            worst = max(worst, abs(float(res)))
        return worst <= 1e-9, f"worst cocycle residual {worst:.3e}"

    rec.run("sphere-ladder-cocycle", "<= 1e-09", 1e-9, sphere_quad)

    def promotion():
        L = dirlim.un_polynomial_ladder(2, levels=(1, 2, 3))
        f = dirlim.LadderedFunction.make("un-poly", 1, {0: Fraction(2), 1: Fraction(1)},
                                         kind="invariant")
        base = dirlim.limit_inner_product(L, f, f)
        for m in (2, 3):
            up = dirlim.apply_nu(L, f, m)
            if dirlim.limit_inner_product(L, up, up) != base:
                return False, f"exact promotion drift at level {m}"
        Ls = dirlim.sphere_ladder(2, levels=(2, 3, 4), method="quadrature")
        g = dirlim.LadderedFunction.make("sphere", 2, {0: 1.0, 1: 0.5}, kind="invariant")
        v0 = dirlim.limit_inner_product(Ls, g, g)
        v1 = dirlim.limit_inner_product(Ls, dirlim.apply_nu(Ls, g, 4),
                                        dirlim.apply_nu(Ls, g, 4))
        if abs(v1 - v0) > 1e-9 * abs(v0):
            return False, f"sphere promotion drift {abs(v1 - v0):.3e}"
        Lh = dirlim.heisenberg_ladder(1.0, d=1, levels=(1, 2), method="quadrature")
        h = dirlim.LadderedFunction.make("heisenberg", 1, {0: 1.0}, kind="invariant")
        w0 = dirlim.limit_inner_product(Lh, h, h)
        w1 = dirlim.limit_inner_product(Lh, dirlim.apply_nu(Lh, h, 2),
                                        dirlim.apply_nu(Lh, h, 2))
        if abs(w1 - w0) > 1e-9 * abs(w0):
            return False, f"flat-model promotion drift {abs(w1 - w0):.3e}"
        return True, "promotion-invariant on all three backends"

    rec.run("limit-pairing-promotion", "invariant under promotion", "exact / 1e-09",
            promotion)


def _suite_zonal(cfg, rec):
    degree = cfg["degree"]
    top = cfg["rank"]
    tol = 1e-10
    for n in range(2, top + 1):
        def self_case(n=n):
            return symmpair.zonal_projection_csq(n, n, degree) == 1, "csq == 1"
        rec.run(f"self-projection-S{n}", "exactly 1", "exact", self_case)
    for m in range(2, top + 1):
        for n in range(2, m):
            for d in range(1, degree + 1):
                def thunk(m=m, n=n, d=d):
                    quad = symmpair.zonal_projection_constant(m, n, d, "quadrature")
                    geg = symmpair.zonal_projection_constant(m, n, d, "gegenbauer")
                    csq = symmpair.zonal_projection_csq(m, n, d)
                    if not 0 < csq <= 1:
                        return False, f"constant {csq} outside (0,1]"
                    diff = abs(quad - geg)
                    exact_diff = abs(quad - math.sqrt(float(csq)))
                    return diff <= tol and exact_diff <= tol, \
                        f"|quad-geg| = {diff:.3e}, |quad-exact| = {exact_diff:.3e}"
                rec.run(f"zonal-constant-S{m}-S{n}-d{d}", "routes agree", tol, thunk)


SUITES = {
    "gamma": _suite_gamma,
    "regnorms": _suite_regnorms,
    "fock-orthogonality": _suite_fock_orthogonality,
    "fock-representation": _suite_fock_representation,
    "pfaffian": _suite_pfaffian,
    "weyl": _suite_weyl,
    "carcano": _suite_carcano,
    "xstability": _suite_xstability,
    "ladders": _suite_ladders,
    "zonal": _suite_zonal,
}


class ConfigError(ValueError):
    pass


def run_suite(name: str, config: dict) -> VerificationReport:
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    rec = _Recorder(bool(config.get("timing")))
    SUITES[name](config, rec)
    return VerificationReport(name, SUITE_ANCHORS[name], rec.cases, config, config["seed"])


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------


def emit_report(report: VerificationReport, fmt: str = "text") -> str:
    if fmt == "json":
        doc = {
            "version": REPORT_VERSION,
            "suite": report.suite,
            "anchor": report.anchor,
            "cases": [c.as_dict(report.anchor) for c in report.cases],
            "config": {k: _jsonable(v) for k, v in sorted(report.config.items())},
            "seed": report.seed,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        lines = ["case_id,anchor,status,expected,actual,tolerance,runtime_ms"]
        for c in report.cases:
            lines.append(",".join([
                c.case_id, report.anchor, c.status,
                _csv_quote(c.expected), _csv_quote(c.actual),
                _csv_quote(c.tolerance),
                "" if c.runtime_ms is None else f"{c.runtime_ms:.3f}",
            ]))
        return "\n".join(lines) + "\n"
    if fmt == "text":
        lines = [f"suite {report.suite} [{report.anchor}] seed={report.seed}"]
        for c in report.cases:
            lines.append(f"  {c.status.upper():4s} {c.case_id}: expected {c.expected},"
                         f" got {c.actual} (tol {c.tolerance})")
        npass = sum(1 for c in report.cases if c.status == "pass")
        lines.append(f"{npass}/{len(report.cases)} cases passed")
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown format {fmt!r}")


def _csv_quote(s: str) -> str:
    if "," in s or '"' in s:
        return '"' + s.replace('"', '""') + '"'
    return s


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


DEFAULTS = {
    "max_k": 12,
    "rank": 3,
    "rank2": None,
    "degree": 4,
    "cutoff": 20,
    "seed": 20240801,
    "t_values": [0.5, 1.0, 2.0],
    "timing": False,
}


def load_config_file(path: str) -> dict:
    """Flat key=value file; '#' starts a comment."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line {raw!r}")
            key, _, val = line.partition("=")
            out[key.strip()] = val.strip()
    return out


def _coerce(key, val):
    if key in ("max_k", "rank", "rank2", "cutoff", "seed", "degree"):
        return int(val)
    if key == "t_values":
        return [float(x) for x in str(val).split(",") if x]
    if key == "timing":
        return str(val).lower() in ("1", "true", "yes")
    return val


def build_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        for k, v in load_config_file(args.config).items():
            if k not in DEFAULTS and k not in ("row", "algebra"):
                raise ConfigError(f"unknown config key {k!r}")
            cfg[k] = _coerce(k, v)
    # flags win over the file
    if args.max_k is not None:
        cfg["max_k"] = args.max_k
    if args.rank is not None:
        parts = str(args.rank).split(",")
        cfg["rank"] = int(parts[0])
        if len(parts) > 1:
            cfg["rank2"] = int(parts[1])
    if args.degree is not None:
        cfg["degree"] = args.degree
    if args.cutoff is not None:
        cfg["cutoff"] = args.cutoff
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.t:
        cfg["t_values"] = [float(x) for x in args.t.split(",")]
    if args.algebra:
        cfg["algebra"] = args.algebra
    if args.row:
        cfg["row"] = args.row
    if args.timing:
        cfg["timing"] = True
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gelfand",
        description="verification suites for the direct-system scalar identities",
    )
    sub = parser.add_subparsers(dest="command")

    verify = sub.add_parser("verify", help="run one verification suite")
    verify.add_argument("suite", nargs="?", help="suite name")
    verify.add_argument("--suite", dest="suite_flag", help="suite name (flag form)")
    verify.add_argument("--max-k", dest="max_k", type=int)
    verify.add_argument("--rank", help="rank, or 'n,m' where a pair is needed")
    verify.add_argument("--degree", type=int)
    verify.add_argument("--cutoff", type=int)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--t", help="comma list of central parameters")
    verify.add_argument("--algebra", help="algebra id (heis:3, vin:17:2, ...) or file")
    verify.add_argument("--row", help="table row id (kac:2, jaw:5a, ...)")
    verify.add_argument("--config", help="flat key=value config file")
    verify.add_argument("--out", help="write the report here instead of stdout")
    verify.add_argument("--format", default="text", choices=["json", "csv", "text"])
    verify.add_argument("--timing", action="store_true",
                        help="fill runtime_ms (breaks byte-identical reruns)")

    listp = sub.add_parser("list-suites", help="list suites and what they verify")

    exp = sub.add_parser("export-ladder", help="write a degree ladder as JSON")
    exp.add_argument("--backend", required=True, choices=["un-poly", "sphere", "heisenberg"])
    exp.add_argument("--degree", type=int, default=2)
    exp.add_argument("--t", type=float, default=1.0)
    exp.add_argument("--out", help="output path (stdout otherwise)")

    args = parser.parse_args(argv)

    if args.command == "list-suites":
        for name in sorted(SUITES):
            print(f"{name:22s} {SUITE_ANCHORS[name]}")
        return 0

    if args.command == "export-ladder":
        if args.backend == "un-poly":
            ladder = dirlim.un_polynomial_ladder(args.degree)
        elif args.backend == "sphere":
            ladder = dirlim.sphere_ladder(args.degree)
        else:
            ladder = dirlim.heisenberg_ladder(args.t, d=args.degree)
        text = dirlim.ladder_to_json(ladder) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0

    if args.command != "verify":
        parser.print_help()
        return 2

    suite = args.suite or args.suite_flag
    if not suite:
        print("error: no suite named; try 'gelfand list-suites'", file=sys.stderr)
        return 2
    try:
        cfg = build_config(args)
        report = run_suite(suite, cfg)
    except (ConfigError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = emit_report(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
