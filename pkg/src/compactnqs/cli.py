"""Command-line front end: build networks from Jastrow or stabilizer input,
verify them against brute-force state vectors, sweep the softening parameter,
and run the VMC optimiser.  Emits JSON/CSV only; plotting happens elsewhere.

Exit codes: 0 success/verified, 1 verification failure, 2 input error,
3 capability limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

import numpy as np

from . import dense as dn
from .configs import zero_magnetization_mask
from .errors import CapabilityError, TableauError
from .graphs import OrderedVertexCover, min_vertex_cover
from .jastrow import CftState, JastrowState, VmjState, extensive_nqs, graph2nqs, \
    sparse_nqs, vmj_nqs
from .nqs import NqsNetwork, univalent_sites, valency, _unpair
from .stabilizer import CheckMatrix, five_qubit_code_state, shor_state, \
    stabilizer_to_vmj_nqs, steane_state, to_graph_state, toric_state
from .vmc import VmcConfig, run_vmc, weights_by_strength

OK, VERIFY_FAILED, INPUT_ERROR, CAPABILITY = 0, 1, 2, 3


def _read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_jastrow(path: str) -> JastrowState:
    return JastrowState.from_json_dict(_read_json(path))


def _load_tableau(path: str) -> CheckMatrix:
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return CheckMatrix.from_json_dict(json.loads(text))
    return CheckMatrix.from_text(text)


def _fixture(name: str) -> CheckMatrix:
    if name == "steane":
        return steane_state()
    if name == "513":
        return five_qubit_code_state()
    if name == "shor":
        return shor_state()
    if name.startswith("toric:"):
        return toric_state(int(name.split(":", 1)[1]))
    raise ValueError(f"unknown fixture {name!r}; use steane, 513, shor or toric:L")


def _parse_cover(text: str) -> OrderedVertexCover:
    vertices = tuple(int(tok) - 1 for tok in text.split(",") if tok.strip())
    return OrderedVertexCover(vertices)


def _write_or_print(payload: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
            if not payload.endswith("\n"):
                fh.write("\n")
    else:
        print(payload)


def _network_summary(net: NqsNetwork) -> str:
    vals = [valency(net, j) for j in range(net.n_visible)]
    uni = sorted(j + 1 for j in univalent_sites(net))
    return (f"hidden units: {net.n_hidden}\n"
            f"valencies: {vals}\n"
            f"univalent sites: {uni}")


def cmd_build(args) -> int:
    state = _load_jastrow(args.input)
    if args.kind == "sparse":
        net = sparse_nqs(state, solution=args.solution)
    elif args.kind == "extensive":
        net = extensive_nqs(state, soften=args.soften)
    else:
        cover = (_parse_cover(args.cover) if args.cover
                 else min_vertex_cover(state.graph))
        if args.kind == "graph2nqs":
            net = graph2nqs(state, cover)
        else:
            gates = {}
            if args.gates:
                for key, mat in _read_json(args.gates).items():
                    gates[int(key) - 1] = np.array(
                        [[_unpair(z) for z in row] for row in mat])
            net = vmj_nqs(VmjState(state, gates, cover))
    if args.out:
        _write_or_print(net.to_json(), args.out)
    print(_network_summary(net))
    return OK


def cmd_stab2nqs(args) -> int:
    cm = _fixture(args.fixture) if args.fixture else _load_tableau(args.input)
    form = to_graph_state(cm)
    net = stabilizer_to_vmj_nqs(cm)
    h_sites = sorted(j + 1 for j in form.h_sites)
    print(f"qubits: {cm.n}")
    print(f"hidden units: {net.n_hidden}")
    print(f"hadamard sites: {h_sites}")
    print("gate layer:", " ".join(
        f"{j + 1}:{tag}" for j, tag in enumerate(form.layer.tags)))
    print("graph edges:", [[s + 1, t + 1] for s, t in form.graph.sorted_edges()])
    if args.out:
        _write_or_print(net.to_json(), args.out)
    if args.verify:
        reference = dn.dense_stabilizer_state(cm, seed=args.seed)
        result = dn.proportional_equal(
            dn.dense_from(net, cm.n), reference, tol=args.tol)
        print(f"max deviation: {result.deviation:.3e}")
        return OK if result.equal else VERIFY_FAILED
    return OK


def _reference_dense(ref: str, n: int, seed: int) -> dn.DenseState:
    if ref.startswith("cft:"):
        _, n_str, alpha = ref.split(":")
        return dn.dense_from(CftState(int(n_str), float(alpha)), int(n_str))
    if ref in ("steane", "513", "shor") or ref.startswith("toric:"):
        return dn.dense_stabilizer_state(_fixture(ref), seed=seed)
    if ref.endswith(".json"):
        payload = _read_json(ref)
        if "graph" in payload:
            return dn.dense_from(JastrowState.from_json_dict(payload), n)
        if "generators" in payload:
            return dn.dense_stabilizer_state(
                CheckMatrix.from_json_dict(payload), seed=seed)
        raise ValueError(f"unrecognised reference JSON {ref!r}")
    return dn.dense_stabilizer_state(_load_tableau(ref), seed=seed)


def cmd_verify(args) -> int:
    net = NqsNetwork.from_json_dict(_read_json(args.nqs))
    if net.n_visible > dn.DENSE_LIMIT:
        raise CapabilityError(
            f"verification tabulates 2^n amplitudes; n={net.n_visible} exceeds "
            f"{dn.DENSE_LIMIT}")
    candidate = dn.dense_from(net, net.n_visible)
    reference = _reference_dense(args.reference, net.n_visible, args.seed)
    result = dn.proportional_equal(candidate, reference, tol=args.tol)
    print(f"max deviation: {result.deviation:.3e} (tol {args.tol:g})")
    if not result.equal and result.index is not None:
        print(f"worst index: {result.index}")
    return OK if result.equal else VERIFY_FAILED


def cmd_soften_sweep(args) -> int:
    sizes = [int(tok) for tok in args.n.split(",")]
    s_values = [float(tok) for tok in args.s_values.split(",")]
    for n in sizes:
        if n % 2 or n > 14:
            raise ValueError("sweep sizes must be even and at most 14")
    columns = {}
    for n in sizes:
        cft = CftState(n, args.alpha)
        exact = dn.dense_from(cft, n)
        mask = zero_magnetization_mask(n)
        devs = []
        for s in s_values:
            net = extensive_nqs(cft.jastrow(), soften=s)
            amps = dn.dense_from(net, n).amplitudes.copy()
            amps[~mask] = 0.0
            devs.append(1.0 - dn.overlap(amps, exact.amplitudes))
        columns[n] = devs
    lines = ["S," + ",".join(f"one_minus_overlap_n{n}" for n in sizes)]
    for k, s in enumerate(s_values):
        lines.append(f"{s:g}," + ",".join(f"{columns[n][k]!r}" for n in sizes))
    _write_or_print("\n".join(lines), args.out)
    return OK


def cmd_vmc(args) -> int:
    if args.config:
        if args.config.endswith(".toml"):
            try:
                import tomllib
            except ModuleNotFoundError:
                import tomli as tomllib
            with open(args.config, "rb") as fh:
                payload = tomllib.load(fh)
        else:
            payload = _read_json(args.config)
    else:
        payload = {}
    for key in ("n", "m", "delta", "sweeps", "samples_per_sweep",
                "learning_rate", "sr_shift", "seed", "sampler", "p_cap"):
        value = getattr(args, key, None)
        if value is not None:
            payload[key] = value
    cfg = VmcConfig.from_json_dict(payload)
    result = run_vmc(cfg)

    prefix = args.out_prefix
    with open(f"{prefix}_trace.csv", "w") as fh:
        fh.write("sweep,energy\n")
        for k, e in enumerate(result.energy_trace):
            fh.write(f"{k},{e!r}\n")
    with open(f"{prefix}_weights.csv", "w") as fh:
        for row in weights_by_strength(result.params.w):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
    with open(f"{prefix}_result.json", "w") as fh:
        fh.write(result.to_json())
        fh.write("\n")
    print(f"final energy: {result.energy_trace[-1]!r}")
    if result.final_overlap is not None:
        print(f"final overlap: {result.final_overlap!r}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compactnqs",
        description="Compact NQS constructions for Jastrow and stabilizer "
                    "states, with brute-force verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a network from a Jastrow state file")
    p.add_argument("--kind", required=True,
                   choices=["sparse", "extensive", "graph2nqs", "vmj"])
    p.add_argument("--input", required=True, help="JastrowState JSON file")
    p.add_argument("--solution", default="asym", choices=["asym", "sqrt"])
    p.add_argument("--soften", type=float, default=None)
    p.add_argument("--cover", default=None,
                   help="comma-separated 1-based cover vertices, in order")
    p.add_argument("--gates", default=None,
                   help="JSON file mapping 1-based sites to 2x2 gates")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("stab2nqs", help="stabilizer tableau to compact network")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="tableau text or JSON file")
    src.add_argument("--fixture", help="steane | 513 | shor | toric:L")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stab2nqs)

    p = sub.add_parser("verify", help="compare a network against a reference")
    p.add_argument("--nqs", required=True, help="NqsNetwork JSON file")
    p.add_argument("--reference", required=True,
                   help="Jastrow JSON, tableau file, fixture name, or cft:N:ALPHA")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("soften-sweep",
                       help="overlap deviation of the softened construction")
    p.add_argument("--n", default="6,8,10", help="comma-separated even sizes")
    p.add_argument("--s-values", default="1,2,3,4,5")
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_soften_sweep)

    p = sub.add_parser("vmc", help="run the VMC optimiser")
    p.add_argument("--config", default=None, help="JSON or TOML config file")
    p.add_argument("--out-prefix", default="vmc")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--sweeps", type=int, default=None)
    p.add_argument("--samples-per-sweep", dest="samples_per_sweep",
                   type=int, default=None)
    p.add_argument("--learning-rate", dest="learning_rate",
                   type=float, default=None)
    p.add_argument("--sr-shift", dest="sr_shift", type=float, default=None)
    p.add_argument("--p-cap", dest="p_cap", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sampler", choices=["metropolis", "exact"], default=None)
    p.set_defaults(func=cmd_vmc)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapabilityError as err:
        print(f"error: {err}", file=sys.stderr)
        return CAPABILITY
    except json.JSONDecodeError as err:
        print(f"error: invalid JSON at line {err.lineno} column {err.colno}: "
              f"{err.msg}", file=sys.stderr)
        return INPUT_ERROR
    except (OSError, TableauError, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
