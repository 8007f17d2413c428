"""Command-line front end: ``xhermite <family|verify|chain|gaps|gram>``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InconsistencyError, InfeasibleGapSetError, XHermiteError
from .exactpoly import ExactPoly, count_real_roots
from .family import (
    FamilySpec,
    c_constant,
    exceptional_hermite,
    gap_wronskian,
    pi_factor,
    ratio_via_wronskians,
)
from .exactpoly import RatFun
from .operators import (
    adjoint_identity_residual,
    build_chain,
    check_spectrum_removal,
    lagrange_identity_residual,
    norm_identity_residual,
    verify_eigen,
    verify_factorization,
)
from .partitions import (
    Partition,
    chain_lengths,
    conjugate,
    degree_sets,
    gapset_multiset_identity,
    is_even,
    parse_partition,
    partition_from_gapset,
    truncate,
    truncation_lengths,
)
from .quadrature import (
    convergence_guard,
    converged_gram,
    formula_diagonal,
    gauss_hermite_rule,
    gram_matrix,
)

log = logging.getLogger("xhermite")

COMMANDS = ("family", "verify", "chain", "gaps", "gram")


@dataclass
class RunConfig:
    partition: Partition
    cutoff: int
    quad_order: int | None
    output_format: str
    seed: int
    gapset: list[int] | None = None
    inject_fault: bool = False


# ---------------------------------------------------------------------------
# serialization

def family_to_json(fam: FamilySpec, cutoff: int) -> dict:
    ds = fam.degree_sets
    return {
        "partition": list(fam.lam.parts),
        "N": fam.N,
        "ell": fam.lam.ell,
        "exceptional_degrees": list(ds.exceptional),
        "sporadic_degrees": list(ds.sporadic),
        "eta": {"coeffs": fam.eta.to_strings()},
        "polynomials": [
            {"n": n, "coeffs": p.to_strings()} for n, p in fam.polynomials(cutoff).items()
        ],
    }


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _float17(v: float) -> str:
    return format(float(v), ".17g")


# ---------------------------------------------------------------------------
# commands

def cmd_family(cfg: RunConfig) -> tuple[int, str]:
    lam = cfg.partition
    if not is_even(lam):
        log.warning("%s is not an even partition: eta has real zeros and the family is "
                    "not orthogonal with respect to a non-singular weight", lam)
    fam = FamilySpec(lam)
    if cfg.output_format == "json":
        return 0, dump_json(family_to_json(fam, cfg.cutoff))
    ds = fam.degree_sets
    out = [
        f"partition: {lam}",
        f"N = {lam.N}, ell = {lam.ell}, even = {str(is_even(lam)).lower()}",
        f"exceptional degrees K = {{{', '.join(map(str, ds.exceptional))}}}",
        f"sporadic degrees = {{{', '.join(map(str, ds.sporadic))}}}",
        f"allowed degrees <= {cfg.cutoff}: {{{', '.join(map(str, ds.allowed(cfg.cutoff)))}}}",
        f"eta = {fam.eta}",
    ]
    for n, p in fam.polynomials(cfg.cutoff).items():
        out.append(f"H[{n}] (deg {p.degree}, lead {p.leading}) = {p}")
    return 0, "\n".join(out) + "\n"


class _Report:
    def __init__(self):
        self.rows: list[dict] = []

    def run(self, name: str, fn) -> None:
        try:
            detail = fn()
        except InconsistencyError as exc:
            self.rows.append({"name": name, "status": "FAIL", "detail": str(exc)})
        except AssertionError as exc:
            self.rows.append({"name": name, "status": "FAIL", "detail": str(exc) or "assertion failed"})
        else:
            self.rows.append({"name": name, "status": "PASS", "detail": detail or ""})

    def skip(self, name: str, why: str) -> None:
        self.rows.append({"name": name, "status": "SKIP", "detail": why})

    @property
    def failed(self) -> bool:
        return any(r["status"] == "FAIL" for r in self.rows)


def _random_poly(rng: random.Random, deg: int) -> ExactPoly:
    return ExactPoly([rng.randint(-9, 9) for _ in range(deg + 1)])


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise InconsistencyError(msg)


def run_verify_suite(cfg: RunConfig) -> _Report:
    lam, cutoff = cfg.partition, cfg.cutoff
    fam = FamilySpec(lam)
    ds = fam.degree_sets
    allowed = ds.allowed(cutoff)
    if cfg.inject_fault and allowed:
        n0 = allowed[0]
        fam.cache[n0] = fam.polynomial(n0) + ExactPoly([1])
    rep = _Report()
    N = lam.N

    def degree_bookkeeping():
        K = ds.exceptional
        _check(len(K) == N, "|K| != N")
        _check(sum(K) == N * (N + 1) // 2, "sum K != N(N+1)/2")
        _check(not K or max(K) == lam.first + N - 1, "max K != lambda_1 + N - 1")
        _check(partition_from_gapset(K) == lam, "gap set does not invert")
        chain_lengths(lam)
        _check(tuple(truncation_lengths(lam)[:-1]) == conjugate(lam).parts, "truncation lengths != conjugate")
        left, right = gapset_multiset_identity(lam)
        _check(left == right, "disjoint-union identity fails")
        return f"K = {list(K)}"

    def degree_laws():
        _check(fam.eta.degree == N or (N == 0 and fam.eta == 1), "deg eta != N")
        _check(fam.eta.leading == 2**N, "lead eta != 2^N")
        for n in allowed:
            p = fam.polynomial(n)
            _check(p.degree == n and p.leading == 2**n, f"degree/lead law fails at n={n}")
        return f"{len(allowed)} polynomials"

    def shift_invariance():
        ls = range(lam.ell, N + 1) if N else [0, 1, 2]
        for l in ls:
            for n in allowed:
                r = ratio_via_wronskians(lam, n, l)
                res = r - RatFun(fam.polynomial(n), fam.eta)
                if not res.is_zero():
                    raise InconsistencyError(f"H/eta differs at n={n}, l={l}", res)
        return f"l in {list(ls)}"

    def gap_representation():
        w = gap_wronskian(lam)
        c = c_constant(lam, N)
        res = w - fam.eta * c
        if not res.is_zero():
            raise InconsistencyError("Wr over K != C_N * eta", res)
        return f"scalar C_N = {c}"

    def eigen():
        for n in allowed:
            verify_eigen(lam, n, fam)
        return f"n <= {cutoff}"

    def krein_adler():
        roots = count_real_roots(fam.eta)
        _check((roots == 0) == is_even(lam), f"real roots {roots}, even = {is_even(lam)}")
        return f"real roots of eta: {roots}"

    rep.run("degree sets", degree_bookkeeping)
    rep.run("degree and leading-coefficient laws", degree_laws)
    rep.run("eigen relation chi(eta, H_n) = 2(N-n) eta H_n", eigen)
    rep.run("shift invariance of H_n/eta", shift_invariance)
    rep.run("gap-set Wronskian representation", gap_representation)
    rep.run("Krein-Adler (zero-free eta iff even)", krein_adler)

    def norm_identity():
        ks = list(ds.exceptional)
        for n in allowed[: max(3, lam.first)]:
            norm_identity_residual(ks, n)
            prod = 1
            for k in ks:
                prod *= n - k
            _check(prod == pi_factor(lam, N, n), f"prod(n - k) != pi_N(n) at n={n}")
        return "ms = K"

    rep.run("norm identity", norm_identity)

    rng = random.Random(cfg.seed)

    def adjoint_lagrange(etas):
        for _ in range(10):
            a, b = rng.choice(etas), rng.choice(etas)
            f, g = _random_poly(rng, rng.randint(0, 5)), _random_poly(rng, rng.randint(0, 5))
            adjoint_identity_residual(a, b, f, g)
            lagrange_identity_residual(a, f, g)
        return "10 random cases"

    if is_even(lam):
        holder = {}

        def chain():
            steps = build_chain(lam, "descending")
            holder["steps"] = steps
            for step in steps:
                lo = step.meta["lo"]
                probes = [ExactPoly.monomial(k) for k in range(6)]
                probes += [exceptional_hermite(lo, n) for n in degree_sets(lo).allowed(N + 4)]
                for y in probes:
                    verify_factorization(step, y)
            _check(not steps or steps[-1].eta_hi.is_constant(), "chain does not end at a constant eta")
            return f"{len(steps)} steps, eps0 = {[s.eps0 for s in steps]}"

        rep.run("descending factorization chain", chain)
        rep.run("spectrum removal", lambda: (check_spectrum_removal(lam, max(cutoff, lam.first + N)), "")[1])

        def positivity():
            for n in allowed:
                _check(pi_factor(lam, N, n) > 0, f"pi_N({n}) <= 0")
            return ""

        rep.run("positive norming constants", positivity)
        etas = [fam.eta] + [s.eta_hi for s in holder.get("steps", [])]
        rep.run("adjoint and Lagrange identities", lambda: adjoint_lagrange(etas))
    else:
        rep.skip("descending factorization chain", "partition is not even")
        rep.skip("spectrum removal", "partition is not even")
        rep.run("adjoint and Lagrange identities", lambda: adjoint_lagrange([fam.eta, ExactPoly([1])]))
    return rep


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    rep = run_verify_suite(cfg)
    status = 1 if rep.failed else 0
    if cfg.output_format == "json":
        return status, dump_json({"partition": list(cfg.partition.parts), "ok": not rep.failed,
                                  "checks": rep.rows})
    lines = [f"verify {cfg.partition} (cutoff {cfg.cutoff})"]
    for r in rep.rows:
        line = f"{r['status']} {r['name']}"
        if r["detail"]:
            line += f": {r['detail']}"
        lines.append(line)
    lines.append("all identities hold" if not rep.failed else "FAILURES present")
    return status, "\n".join(lines) + "\n"


def chain_rows(lam: Partition) -> list[dict]:
    steps = build_chain(lam, "descending")
    ds = degree_sets(lam)
    K = set(ds.exceptional)
    rows = []
    for j, step in enumerate(steps, start=1):
        K = K | {ds.sporadic[j - 1]}
        sub = truncate(lam, j)
        rows.append({
            "j": j,
            "K": sorted(K),
            "partition": list(sub.parts),
            "N": sub.N,
            "ell": sub.ell,
            "eps0": step.eps0,
            "added_degree": ds.sporadic[j - 1],
            "removed_eigenvalue": step.eps0,
        })
    return rows


def cmd_chain(cfg: RunConfig) -> tuple[int, str]:
    lam = cfg.partition
    rows = chain_rows(lam)
    check_spectrum_removal(lam, max(cfg.cutoff, lam.first + lam.N))
    if cfg.output_format == "json":
        return 0, dump_json({"partition": list(lam.parts), "steps": rows})
    if not rows:
        return 0, f"chain for {lam}: empty, already the classical operator\n"
    out = [f"chain for {lam}: {len(rows)} steps down to the classical operator"]
    for r in rows:
        out.append(
            f"K_{r['j']} = {{{', '.join(map(str, r['K']))}}}  "
            f"lambda^({r['j']}) = {Partition(tuple(r['partition']))}  "
            f"N_{r['j']} = {r['N']}  ell_{r['j']} = {r['ell']}  "
            f"eps0 = 2 ell_{r['j'] - 1} = {r['eps0']} (eigenvalue {r['removed_eigenvalue']} removed)"
        )
    return 0, "\n".join(out) + "\n"


def cmd_gaps(cfg: RunConfig) -> tuple[int, str]:
    ks = cfg.gapset or []
    try:
        lam = partition_from_gapset(ks)
    except InfeasibleGapSetError as exc:
        if cfg.output_format == "json":
            return 1, dump_json({"gapset": ks, "feasible": False, "reason": exc.reason,
                                 "message": str(exc)})
        return 1, f"infeasible: {exc} [{exc.reason}]\n"
    if cfg.output_format == "json":
        return 0, dump_json({"gapset": sorted(ks), "feasible": True, "partition": list(lam.parts),
                             "even": is_even(lam)})
    return 0, f"partition {lam}, N = {lam.N}, even = {str(is_even(lam)).lower()}\n"


def cmd_gram(cfg: RunConfig) -> tuple[int, str]:
    lam = cfg.partition
    fam = FamilySpec(lam)
    degrees = fam.degree_sets.allowed(cfg.cutoff)
    if cfg.quad_order is None:
        G, order = converged_gram(lam, degrees, family=fam)
    else:
        order = cfg.quad_order
        G = gram_matrix(lam, degrees, gauss_hermite_rule(order), fam)
        convergence_guard(lam, degrees, order, family=fam)
    formula = formula_diagonal(lam, degrees)
    dev = np.abs(np.diag(G) - formula) / formula if degrees else np.zeros(0)
    max_dev = float(dev.max()) if degrees else 0.0
    if cfg.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree"] + degrees)
        for n, row in zip(degrees, G):
            w.writerow([n] + [_float17(v) for v in row])
        w.writerow(["formula_diagonal"] + [_float17(v) for v in formula])
        w.writerow(["relative_deviation"] + [_float17(v) for v in dev])
        return 0, buf.getvalue()
    if cfg.output_format == "json":
        return 0, dump_json({
            "partition": list(lam.parts), "degrees": degrees, "quad_order": order,
            "gram": [[_float17(v) for v in row] for row in G],
            "formula_diagonal": [_float17(v) for v in formula],
            "relative_deviation": [_float17(v) for v in dev],
            "max_relative_deviation": _float17(max_dev),
        })
    out = [f"Gram matrix for {lam}, degrees {degrees}, quadrature order {order}"]
    for n, row in zip(degrees, G):
        out.append(f"{n:>4}: " + " ".join(f"{v: .6e}" for v in row))
    out.append("formula diagonal: " + " ".join(f"{v:.6e}" for v in formula))
    out.append(f"max relative deviation: {max_dev:.3e}")
    return 0, "\n".join(out) + "\n"


HANDLERS = {"family": cmd_family, "verify": cmd_verify, "chain": cmd_chain,
            "gaps": cmd_gaps, "gram": cmd_gram}


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--partition", default=d(""), help="comma-separated parts, e.g. 3,3,1,1")
    p.add_argument("--cutoff", type=int, default=d(None), help="largest degree to list")
    p.add_argument("--quad-order", type=int, default=d(None),
                   help="Gauss-Hermite order (default: doubled from max(60, 4n) until converged)")
    p.add_argument("--format", choices=["human", "json", "csv"], default=d("human"))
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--out", default=d(None), help="write output to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xhermite",
                                     description="Exceptional Hermite polynomials from partitions.")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        _add_common(sp, suppress=True)
        if name == "verify":
            sp.add_argument("--inject-fault", action="store_true",
                            help="corrupt one cached polynomial (negative control)")
        if name != "gaps":
            sp.add_argument("partition_arg", nargs="?", default=None, metavar="PARTITION",
                            help="partition, same as --partition")
        if name == "gaps":
            sp.add_argument("gapset", nargs="?", default=None, help="comma-separated degrees")
            sp.add_argument("--gaps", dest="gaps_opt", default=None)
    return parser


def _parse_ints(text: str) -> list[int]:
    text = text.strip().strip("{}")
    return [int(t) for t in text.split(",") if t.strip()] if text else []


def make_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    positional = getattr(args, "partition_arg", None)
    try:
        lam = parse_partition(args.partition)
        if positional is not None:
            other = parse_partition(positional)
            if args.partition and other != lam:
                parser.error("partition given twice with different values")
            lam = other
    except XHermiteError as exc:
        parser.error(str(exc))
    floor = lam.first + lam.N
    cutoff = args.cutoff if args.cutoff is not None else floor + 4
    if cutoff < floor:
        parser.error(f"--cutoff must be at least lambda_1 + N = {floor}")
    if args.quad_order is not None and args.quad_order < 1:
        parser.error("--quad-order must be positive")
    gapset = None
    if args.command == "gaps":
        text = args.gapset if args.gapset is not None else args.gaps_opt
        if text is None:
            parser.error("gaps needs a comma-separated list of degrees")
        try:
            gapset = _parse_ints(text)
        except ValueError:
            parser.error(f"cannot parse gap set {text!r}")
    return RunConfig(lam, cutoff, args.quad_order, args.format, args.seed, gapset,
                     getattr(args, "inject_fault", False))


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="warning: %(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = make_config(args, parser)
    try:
        status, text = HANDLERS[args.command](cfg)
    except XHermiteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
