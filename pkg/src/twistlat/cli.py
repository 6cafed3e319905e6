"""JSON-in / JSON-out command line.

Exit status: 0 on success, 1 when the input is rejected, 2 when an internal
invariant fails (a bug).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any

from . import kernels
from .cocycle_pairing import (
    AlternatingForm,
    BilinearCocycle,
    cocycle_from_pairing,
    pairing_of_cocycle,
    verify_cocycle_table,
)
from .errors import InputError, InvariantViolation
from .exact_linalg import as_int_matrix, cokernel_of, det, is_perfect_square, smith_normal_form
from .isogeny_lattice import CONVENTION
from .kuga_satake import even_clifford_rank, exterior_kernel_oracle, ks_degree
from .serialize import (
    decode_int,
    decode_int_matrix,
    decode_rat_matrix,
    encode_group,
    encode_matrix,
)
from .spectral_decomposition import decompose_principal_chain, verify_decomposition
from .twisted_hodge import BField, ComplexStructure, build_J_alpha, symplectic_report
from .witness import run_witness_pipeline


def _chain(payload: dict) -> list[int]:
    if "chain" not in payload:
        raise InputError("missing 'chain'")
    return [decode_int(x) for x in payload["chain"]]


def _prime(payload: dict, args) -> int | None:
    if args.prime is not None:
        return args.prime
    p = payload.get("prime")
    return None if p is None else decode_int(p)


def cmd_snf(payload: dict, args) -> dict:
    m = decode_int_matrix(payload["matrix"])
    snf = smith_normal_form(m)
    out = {
        "U": encode_matrix(snf.U),
        "D": encode_matrix(snf.D),
        "V": encode_matrix(snf.V),
        "diagonal": [str(d) for d in snf.diagonal],
    }
    if m.shape[0] == m.shape[1] and det(m) != 0:
        out["cokernel"] = encode_group(cokernel_of(m))
    return out


def cmd_decompose(payload: dict, args) -> dict:
    cert = decompose_principal_chain(_chain(payload), _prime(payload, args))
    verdict = verify_decomposition(cert)
    return {
        "chain": [str(a) for a in cert.chain.a],
        "prime": None if cert.prime is None else str(cert.prime),
        "N": str(cert.N),
        "factors": [encode_matrix(f) for f in cert.factors],
        "factor_kernels": [encode_group(cokernel_of(f)) for f in cert.factors],
        "verified": verdict.ok,
        "reason": verdict.reason,
    }


def cmd_witness(payload: dict, args) -> dict:
    report = run_witness_pipeline(
        _chain(payload), payload.get("n_policy", "exponent"), _prime(payload, args)
    )
    if not report.ok:
        raise InvariantViolation("witness pipeline produced a failing verdict")
    return report.to_dict()


def _twisted(side: dict):
    n = decode_int(side.get("n", 1))
    J = decode_rat_matrix(side["J"])
    g = J.shape[0] // 2
    B = decode_rat_matrix(side["B"]) if "B" in side else J * 0
    return build_J_alpha(ComplexStructure(g, J), BField(g, n, B))


def cmd_verify_symplectic(payload: dict, args) -> dict:
    src, dst = _twisted(payload["src"]), _twisted(payload["dst"])
    rep = symplectic_report(decode_int_matrix(payload["psi"]), src, dst)
    return {
        "convention": CONVENTION,
        "unimodular": rep.unimodular,
        "preserves_form": rep.preserves_form,
        "intertwines": rep.intertwines,
        "symplectic_isomorphism": rep.symplectic_isomorphism,
    }


def _random_nonsingular(r: int, rng: random.Random, bound: int = 3):
    while True:
        m = [[rng.randint(-bound, bound) for _ in range(r)] for _ in range(r)]
        if det(as_int_matrix(m)) != 0:
            return as_int_matrix(m)


def _ks_report(rep) -> dict:
    return {
        "r": rep.r,
        "d": str(rep.d),
        "closed_form": str(rep.closed_form),
        "oracle_value": str(rep.oracle_value),
        "agrees": rep.agrees,
        "perfect_square": rep.principal,
        "per_grade": [
            {"grade": g.grade, "rank": str(g.rank), "det": str(g.det), "exponent": str(g.exponent)}
            for g in rep.per_grade
        ],
    }


def cmd_ks_degree(payload: dict, args) -> dict:
    if "matrix" in payload:
        return _ks_report(exterior_kernel_oracle(decode_int_matrix(payload["matrix"])))
    r = decode_int(payload["r"])
    if "samples" in payload:
        rng = random.Random(args.seed)
        reports = [exterior_kernel_oracle(_random_nonsingular(r, rng))
                   for _ in range(decode_int(payload["samples"]))]
        return {
            "seed": args.seed,
            "r": r,
            "samples": len(reports),
            "all_agree": all(rep.agrees for rep in reports),
            "reports": [_ks_report(rep) for rep in reports],
        }
    d = decode_int(payload["d"])
    value = ks_degree(d, r)
    return {
        "d": str(d),
        "r": r,
        "degree": str(value),
        "perfect_square": is_perfect_square(value),
        "even_clifford_rank": str(even_clifford_rank(r)),
    }


def cmd_cocycle(payload: dict, args) -> dict:
    n = decode_int(payload["n"])
    if "table" in payload:
        m, k = decode_int(payload["m"]), decode_int(payload["k"])
        table = [[decode_int(x) for x in row] for row in payload["table"]]
        return {"n": str(n), "m": str(m), "k": str(k), "backend": kernels.BACKEND,
                "is_normalized_cocycle": verify_cocycle_table(n, m, k, table)}
    if "pairing" in payload:
        e = AlternatingForm(n, decode_int_matrix(payload["pairing"]))
        c = cocycle_from_pairing(e)
        return {"n": str(n), "pairing": encode_matrix(e.E), "cocycle": encode_matrix(c.beta),
                "round_trip": bool((pairing_of_cocycle(c).E == e.E).all())}
    if "cocycle" in payload:
        c = BilinearCocycle(n, decode_int_matrix(payload["cocycle"]))
        return {"n": str(n), "cocycle": encode_matrix(c.beta),
                "pairing": encode_matrix(pairing_of_cocycle(c).E)}
    if "sweep" in payload:
        count = decode_int(payload["sweep"].get("count", 100))
        k_max = decode_int(payload["sweep"].get("k_max", 4))
        rng = random.Random(args.seed)
        failures = 0
        for _ in range(count):
            k = rng.randint(1, k_max)
            E = [[0] * k for _ in range(k)]
            for i in range(k):
                for j in range(i + 1, k):
                    x = rng.randrange(n)
                    E[i][j], E[j][i] = x, -x
            e = AlternatingForm(n, E)
            if not (pairing_of_cocycle(cocycle_from_pairing(e)).E == e.E).all():
                failures += 1
        return {"n": str(n), "seed": args.seed, "count": count, "failures": failures}
    raise InputError("cocycle input needs one of 'table', 'pairing', 'cocycle', 'sweep'")


COMMANDS = {
    "snf": cmd_snf,
    "decompose": cmd_decompose,
    "witness": cmd_witness,
    "verify-symplectic": cmd_verify_symplectic,
    "ks-degree": cmd_ks_degree,
    "cocycle": cmd_cocycle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="infile", default="-", help="input JSON file (default: stdin)")
    common.add_argument("--out", dest="outfile", default="-", help="output JSON file (default: stdout)")
    common.add_argument("--prime", type=int, default=None, help="require factors prime to p")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")

    parser = argparse.ArgumentParser(prog="twistlat", description=__doc__.splitlines()[0])
    parser.add_argument("--convention", action="store_true",
                        help="print the fixed symplectic sign convention and exit")
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _read(path: str) -> Any:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return json.loads(text)


def _write(path: str, obj: Any) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.convention:
        _write("-", {"convention": CONVENTION})
        return 0
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        payload = _read(args.infile)
        if not isinstance(payload, dict):
            raise InputError("input must be a JSON object")
        result = COMMANDS[args.command](payload, args)
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except (InputError, KeyError, TypeError, ValueError, OSError) as exc:
        # json.JSONDecodeError is a ValueError
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1
    _write(args.outfile, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
