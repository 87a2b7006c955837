# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Command-line entry point: betti, presentation and verify."""
from __future__ import annotations

import argparse
import json
import os
import pathlib
import sys
import time
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple


# **********************************************************
# Update sys.path before importing any bundled libraries.
# **********************************************************
def update_sys_path(path_to_add: str, strategy: str) -> None:
    """Add given path to `sys.path`."""
    if path_to_add not in sys.path and os.path.isdir(path_to_add):
        if strategy == "useBundled":
            sys.path.insert(0, path_to_add)
        else:
            sys.path.append(path_to_add)


BUNDLE_DIR = pathlib.Path(__file__).parent.parent
update_sys_path(os.fspath(BUNDLE_DIR / "tool"), "useBundled")
update_sys_path(
    os.fspath(BUNDLE_DIR / "libs"),
    os.getenv("STRATA_RINGS_IMPORT_STRATEGY", "useBundled"),
)


# pylint: disable=wrong-import-position,import-error
import attrs
import betti_recursion as br
import boundary_ideals as bi
import graded_dimension as gd
import strata_cache as cache
import strata_combinatorics as comb
import strata_utils as utils
import transfer_maps as tm

CHECKS = (
    "duality",
    "euler",
    "recursion-match",
    "torsion-relation",
    "transfer-welldef",
    "transfer-surjective",
    "h1-closed-form",
)
PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _check_list(value: str) -> List[str]:
    names = [name.strip() for name in value.split(",") if name.strip()]
    unknown = [name for name in names if name not in CHECKS]
    if unknown or not names:
        raise argparse.ArgumentTypeError(
            f"unknown check(s) {', '.join(unknown) or '(none)'}; choose from {', '.join(CHECKS)}"
        )
    return names


def _non_negative(value: str) -> int:
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return number


def build_arg_parse() -> argparse.ArgumentParser:
    """Builds the arguments parser."""
    parser = argparse.ArgumentParser(
        prog=utils.TOOL_NAME,
        description="Cohomology ring presentations of complex and real moduli of rational curves.",
    )
    parser.add_argument(
        "--cache-dir",
        action="store",
        default=None,
        help="Directory of cached Betti vectors (default: $STRATA_RINGS_CACHE, none if unset).",
    )
    parser.add_argument(
        "--jobs",
        action="store",
        type=int,
        default=None,
        help="Number of worker processes used for degree slices.",
    )
    parser.add_argument(
        "--column-ceiling",
        action="store",
        type=int,
        default=None,
        help="Abort a degree slice wider than this many monomials.",
    )
    parser.add_argument(
        "--no-modular-precheck",
        action="store_true",
        help="Always run exact elimination, skipping the rank computation modulo a prime.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {utils.TOOL_VERSION}"
    )

    commands = parser.add_subparsers(dest="command", required=True)

    def _common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--family", choices=comb.FAMILIES, required=True)
        sub.add_argument("--ell", type=int, required=True)
        sub.add_argument(
            "--json", action="store_true", help="Print a JSON document instead of text."
        )

    betti = commands.add_parser("betti", help="Print the Betti numbers.")
    _common(betti)
    betti.add_argument(
        "--method", choices=(gd.RECURSION, gd.RANK, "both"), default=gd.RECURSION
    )
    betti.add_argument("--max-degree", type=_non_negative, default=None)
    betti.add_argument(
        "--timing",
        action="store_true",
        help="Report the elapsed time on stderr.",
    )

    presentation = commands.add_parser(
        "presentation", help="Print the generators and relations."
    )
    _common(presentation)

    verify = commands.add_parser("verify", help="Run verification suites.")
    _common(verify)
    verify.add_argument("--checks", type=_check_list, required=True)
    verify.add_argument("--max-degree", type=_non_negative, default=None)
    verify.add_argument(
        "--degree-bound",
        type=_non_negative,
        default=None,
        help="Multiplier degree used when checking that the transfer map is well defined.",
    )
    return parser


# **********************************************************
# Betti vectors, cached.
# **********************************************************
def _requested_bound(family: str, ell: int, dmax: Optional[int]) -> Tuple[Optional[int], bool]:
    """Clamps --max-degree once per command; None keeps the full range."""
    if dmax is None:
        gd.check_ell(family, ell)
        return None, False
    return gd.clamp_degree(family, ell, dmax)


def _effective_bound(family: str, ell: int, dmax: Optional[int]) -> Optional[int]:
    """The truncation degree of a clamped bound, or None for the full range."""
    top = gd.top_degree(family, ell)
    if dmax is None or dmax >= top:
        return None
    return dmax


def rank_vector(
    family: str, ell: int, dmax: Optional[int] = None, clamped: bool = False
) -> Tuple[gd.BettiVector, str, str]:
    """Returns (vector, source, presentation hash), serving the cache when it is fresh."""
    gd.check_ell(family, ell)
    truncated_at = _effective_bound(family, ell, dmax)
    digest = bi.presentation_hash(bi.ideal_for(family, ell))
    record = cache.cache_get(family, ell, gd.RANK, truncated_at, digest)
    if record is not None:
        vector = gd.BettiVector(
            family,
            ell,
            record.dims,
            method=gd.RANK,
            truncated_at=record.truncated_at,
            clamped=clamped,
        )
        return vector, "cache", digest

    vector = gd.quotient_dims(family, ell, dmax)
    cache.cache_put(
        cache.CacheRecord(
            family=family,
            ell=ell,
            dims=vector.dims,
            method=gd.RANK,
            truncated_at=vector.truncated_at,
            presentation_hash=digest,
        )
    )
    return attrs.evolve(vector, clamped=clamped or vector.clamped), "computed", digest


def recursion_vector(
    family: str, ell: int, dmax: Optional[int] = None, clamped: bool = False
) -> gd.BettiVector:
    vector = br.betti(family, ell)
    truncated_at = _effective_bound(family, ell, dmax)
    if truncated_at is None:
        return attrs.evolve(vector, clamped=clamped)
    return gd.BettiVector(
        family,
        ell,
        vector.dims[: truncated_at + 1],
        method=gd.RECURSION,
        truncated_at=truncated_at,
    )


def vector_document(vector: gd.BettiVector, digest: Optional[str]) -> Dict[str, object]:
    """The JSON document of a Betti vector."""
    return {
        "family": vector.family,
        "ell": vector.ell,
        "dims": list(vector.reported_dims),
        "method": vector.method,
        "truncated_at": vector.truncated_at,
        "clamped": vector.clamped,
        "tool_version": utils.TOOL_VERSION,
        "presentation_hash": digest,
    }


def _dims_text(vector: gd.BettiVector) -> str:
    return " ".join(str(d) for d in vector.reported_dims)


def _dump(document: object, stdout: TextIO) -> None:
    print(json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False), file=stdout)


def cmd_betti(args: argparse.Namespace, stdout: TextIO, stderr: TextIO) -> int:
    started = time.perf_counter()
    exit_code = EXIT_OK
    vectors: List[Tuple[gd.BettiVector, Optional[str]]] = []
    source = gd.RECURSION

    bound, clamped = _requested_bound(args.family, args.ell, args.max_degree)
    if args.method in (gd.RANK, "both"):
        vector, source, digest = rank_vector(args.family, args.ell, bound, clamped)
        vectors.append((vector, digest))
    if args.method in (gd.RECURSION, "both"):
        vectors.append((recursion_vector(args.family, args.ell, bound, clamped), None))

    match = None
    if args.method == "both":
        match = vectors[0][0].dims == vectors[1][0].dims
        if not match:
            exit_code = EXIT_FAILED
            utils.log_error(
                f"Rank and recursion disagree for {args.family} ℓ={args.ell}: "
                f"{_dims_text(vectors[0][0])} vs {_dims_text(vectors[1][0])}"
            )

    if args.json:
        documents = [vector_document(v, digest) for v, digest in vectors]
        if match is None:
            _dump(documents[0], stdout)
        else:
            _dump({"results": documents, "match": match}, stdout)
    else:
        for vector, _ in vectors:
            line = f"{vector.family} ℓ={vector.ell} {vector.method}: {_dims_text(vector)}"
            if vector.truncated_at is not None:
                line += f" (through degree {vector.truncated_at})"
            if vector.clamped:
                top = gd.top_degree(vector.family, vector.ell)
                line += f" (max degree clamped to {top})"
            print(line, file=stdout)
        if match is not None:
            print(f"verdict: {'MATCH' if match else 'MISMATCH'}", file=stdout)
        print(f"source: {source}", file=stdout)

    if args.timing:
        print(f"elapsed: {time.perf_counter() - started:.3f}s", file=stderr)
    return exit_code


# **********************************************************
# Presentation.
# **********************************************************
def cmd_presentation(args: argparse.Namespace, stdout: TextIO, _stderr: TextIO) -> int:
    presentation = bi.ideal_for(args.family, args.ell)
    document = bi.presentation_document(presentation)
    document["presentation_hash"] = bi.presentation_hash(presentation)
    if args.json:
        _dump(document, stdout)
        return EXIT_OK

    print(f"{document['family']} ℓ={document['ell']} on {document['ground']}", file=stdout)
    print(f"alphabet ({len(document['alphabet'])}):", file=stdout)
    for entry in document["alphabet"]:
        print(f"  {entry['name']}  degree {entry['degree']}", file=stdout)
    print(f"relations ({len(document['generators'])}):", file=stdout)
    for entry in document["generators"]:
        print(f"  [{entry['tag']}] {entry['polynomial']}", file=stdout)
    print(f"hash: {document['presentation_hash']}", file=stdout)
    return EXIT_OK


# **********************************************************
# Verification suites.
# **********************************************************
Verdict = Tuple[str, str]


class _Verifier:
    """Runs the named checks, sharing the rank vector between them."""

    def __init__(self, args: argparse.Namespace):
        self.family = args.family
        self.ell = args.ell
        self.max_degree = args.max_degree
        self.degree_bound = args.degree_bound
        self._rank: Optional[gd.BettiVector] = None
        self.incomplete = False

    @property
    def rank(self) -> gd.BettiVector:
        if self._rank is None:
            bound, clamped = _requested_bound(self.family, self.ell, self.max_degree)
            self._rank, _, _ = rank_vector(self.family, self.ell, bound, clamped)
        return self._rank

    def duality(self) -> Verdict:
        vector = self.rank
        if vector.truncated_at is not None:
            return SKIP, "vector is truncated"
        dims = list(vector.dims)
        if dims == dims[::-1]:
            return PASS, _dims_text(vector)
        return FAIL, f"not palindromic: {dims}"

    def euler(self) -> Verdict:
        if self.family == comb.COMPLEX:
            return SKIP, "only odd-dimensional real spaces have vanishing Euler characteristic"
        vector = self.rank
        if vector.truncated_at is not None:
            return SKIP, "vector is truncated"
        chi = gd.euler_characteristic(vector)
        return (PASS if chi == 0 else FAIL), f"χ = {chi}"

    def recursion_match(self) -> Verdict:
        vector = self.rank
        expected = recursion_vector(self.family, self.ell, vector.truncated_at)
        if vector.dims == expected.dims:
            return PASS, _dims_text(vector)
        return FAIL, f"rank {_dims_text(vector)} vs recursion {_dims_text(expected)}"

    def torsion_relation(self) -> Verdict:
        if self.family == comb.COMPLEX:
            return SKIP, "real family only"
        ground = comb.standard_ground(self.ell)
        presentation = bi.real_ideal(ground)
        total = failed = 0
        for a in ground.labels:
            for b in ground.labels:
                for c in ground.labels:
                    if len({a, b, c}) < 3:
                        continue
                    total += 1
                    if not gd.ideal_contains(
                        presentation, bi.real_e2b2_element(ground, a, b, c)
                    ):
                        failed += 1
        if total == 0:
            return SKIP, "needs three marks"
        return (FAIL if failed else PASS), f"{total - failed} of {total} relations in the ideal"

    def transfer_welldef(self) -> Verdict:
        results = list(tm.f_ideal_transport(self.family, self.ell))
        report = tm.verify_phi_well_defined(self.family, self.ell, self.degree_bound)
        if not report.complete:
            self.incomplete = True
            return FAIL, "incomplete: column ceiling exceeded"
        results.extend(report.checks)
        results.extend(tm.lemma_transport(self.family, self.ell))
        failed = [r for r in results if not r.passed]
        detail = f"{len(results) - len(failed)} of {len(results)} checks passed"
        if failed:
            detail += f"; first failure {failed[0].check} {' '.join(failed[0].indices)}"
        return (FAIL if failed else PASS), detail

    def transfer_surjective(self) -> Verdict:
        top = gd.top_degree(self.family, self.ell + 1)
        last = top if self.max_degree is None else min(top, self.max_degree)
        missed = [
            d
            for d in range(last + 1)
            if not tm.verify_phi_surjective(self.family, self.ell, d)
        ]
        if missed:
            return FAIL, f"not surjective in degrees {missed}"
        return PASS, f"surjective in degrees 0..{last}"

    def h1_closed_form(self) -> Verdict:
        if self.family == comb.COMPLEX:
            return SKIP, "real family only"
        expected = br.real_h1_closed_form(self.ell)
        recursion = br.real_betti(self.ell).dims[1]
        computed = gd.quotient_dims(self.family, self.ell, 1).dims[1]
        detail = f"closed form {expected}, recursion {recursion}, rank {computed}"
        return (PASS if expected == recursion == computed else FAIL), detail

    def run(self, name: str) -> Verdict:
        check: Callable[[], Verdict] = getattr(self, name.replace("-", "_"))
        return check()


def cmd_verify(args: argparse.Namespace, stdout: TextIO, _stderr: TextIO) -> int:
    gd.check_ell(args.family, args.ell)
    verifier = _Verifier(args)
    rows = []
    for name in args.checks:
        try:
            verdict, detail = verifier.run(name)
        except utils.ResourceLimitError as err:
            utils.log_error(f"{name} is incomplete: {err}")
            verdict, detail = FAIL, "incomplete: column ceiling exceeded"
            verifier.incomplete = True
        rows.append({"check": name, "verdict": verdict, "detail": detail})

    passed = all(row["verdict"] != FAIL for row in rows)
    if args.json:
        _dump(
            {
                "family": args.family,
                "ell": args.ell,
                "checks": rows,
                "passed": passed,
                "incomplete": verifier.incomplete,
                "tool_version": utils.TOOL_VERSION,
            },
            stdout,
        )
    else:
        for row in rows:
            print(f"{row['check']}: {row['verdict']} ({row['detail']})", file=stdout)
    return EXIT_OK if passed else EXIT_FAILED


# **********************************************************
# Entry points.
# **********************************************************
COMMANDS = {
    "betti": cmd_betti,
    "presentation": cmd_presentation,
    "verify": cmd_verify,
}


def run_cli(
    argv: Sequence[str],
    stdout: TextIO,
    stderr: TextIO,
    _stdin: Optional[TextIO] = None,
) -> int:
    """Parses `argv` and runs the command; returns the exit code."""
    parser = build_arg_parse()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as ex:
        return ex.code if isinstance(ex.code, int) else EXIT_USAGE

    overrides = {
        "cacheDir": args.cache_dir,
        "jobs": args.jobs,
        "columnCeiling": args.column_ceiling,
        "modularPrecheck": False if args.no_modular_precheck else None,
        "verifyDegreeBound": getattr(args, "degree_bound", None),
    }
    try:
        with utils.settings_override(**overrides):
            return COMMANDS[args.command](args, stdout, stderr)
    except utils.InvalidArgumentError as err:
        print(f"{utils.TOOL_NAME}: error: {err}", file=stderr)
        return EXIT_USAGE
    except utils.ResourceLimitError as err:
        utils.log_error(str(err))
        print(f"incomplete: {err}", file=stdout)
        return EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_cli(sys.argv[1:] if argv is None else argv, sys.stdout, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
