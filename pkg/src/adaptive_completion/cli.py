"""Command-line entry point: ``adaptive-completion <subcommand> ...``."""
from __future__ import annotations

import argparse
import sys

from .algorithms import ALGORITHMS, AlgoConfig
from .bench import (ExperimentConfig, compare_algorithms, format_comparison, format_replay,
                    replay_paper_example, run_experiment)
from .generate import GenSpec, generate
from .oracle import read_matrix_file, write_matrix_file
from .sparsity import (EnumerationCapError, SubspaceBasis, coherence, nonsparsity_subspace)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {value}")
    return value


def _unit_interval(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1), got {value}")
    return value


def _add_gen_args(p: argparse.ArgumentParser, need_shape: bool = True) -> None:
    p.add_argument("--m", type=_positive_int, required=need_shape, help="rows")
    p.add_argument("--n", type=_positive_int, required=need_shape, help="columns")
    p.add_argument("--rank", type=_positive_int, required=need_shape, help="target rank")
    p.add_argument("--psi-u", type=_positive_int, help="column-space nonsparsity target/estimate")
    p.add_argument("--psi-v", type=_positive_int, help="row-space nonsparsity target/estimate")
    p.add_argument("--seed", type=_seed, default=0)


def _add_run_args(p: argparse.ArgumentParser) -> None:
    _add_gen_args(p, need_shape=False)
    p.add_argument("--matrix-file", help="fixed instance instead of generated ones")
    p.add_argument("--epsilon", type=_unit_interval, default=0.1)
    p.add_argument("--T", type=_positive_int, default=3, help="ERRE delay parameter")
    p.add_argument("--d", type=_positive_int, help="override the per-column sample size")
    p.add_argument("--trials", type=_positive_int, default=1)
    p.add_argument("--generated-psi", action="store_true",
                   help="also impose --psi-u/--psi-v on generated instances")
    p.add_argument("--no-wall-time", action="store_true",
                   help="write 0 in the wall_time_s column (byte-reproducible CSV)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adaptive-completion",
                                     description="Adaptive exact low-rank matrix completion.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated matrix file")
    _add_gen_args(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("psi", help="nonsparsity, sparsity-number and coherence of a matrix file")
    p.add_argument("--matrix-file", required=True)
    p.add_argument("--cap", type=_positive_int, default=20, help="enumeration cap")

    p = sub.add_parser("run", help="Monte-Carlo trials of one algorithm")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), required=True)
    _add_run_args(p)
    p.add_argument("--out", help="CSV output path")

    p = sub.add_parser("compare", help="compare algorithms over shared instances")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), action="append", required=True,
                   help="repeat to compare several")
    _add_run_args(p)

    sub.add_parser("replay-paper", help="EREI walkthrough on the 6x4 example")
    return parser


def _gen_spec(args, with_targets: bool) -> GenSpec:
    if args.m is None or args.n is None or args.rank is None:
        raise ValueError("--m, --n and --rank are required without --matrix-file")
    return GenSpec(args.m, args.n, args.rank,
                   psi_u_target=args.psi_u if with_targets else None,
                   psi_v_target=args.psi_v if with_targets else None,
                   seed=args.seed)


def _experiment(args, algo: str, out=None) -> ExperimentConfig:
    if args.matrix_file:
        m, n = read_matrix_file(args.matrix_file).shape
        gen = None
        if args.rank is None:
            raise ValueError("--rank is required with --matrix-file")
    else:
        gen = _gen_spec(args, args.generated_psi)
        m, n = gen.m, gen.n
    r = args.rank
    params = AlgoConfig(
        r=r,
        psi_u=args.psi_u if args.psi_u is not None else m - r + 1,
        psi_v=args.psi_v if args.psi_v is not None else n - r + 1,
        epsilon=args.epsilon, T=args.T, d_override=args.d)
    return ExperimentConfig(algo=algo, gen=gen, matrix_file=args.matrix_file,
                            algo_params=params, trials=args.trials, master_seed=args.seed,
                            out_path=out, record_wall_time=not args.no_wall_time)


def _cmd_psi(args) -> None:
    matrix = read_matrix_file(args.matrix_file)
    for label, mat in (("column", matrix), ("row", matrix.T)):
        basis = SubspaceBasis.from_matrix(mat)
        if basis.dim == 0:
            raise ValueError("matrix is zero; nonsparsity undefined")
        psi = nonsparsity_subspace(basis, cap=args.cap)
        print(f"{label}_space_rank: {basis.dim}")
        print(f"{label}_space_psi: {psi}")
        print(f"{label}_space_sparsity: {basis.ambient_dim - psi}")
        print(f"{label}_space_coherence: {coherence(basis):.6f}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            matrix = generate(_gen_spec(args, with_targets=True))
            write_matrix_file(args.out, matrix)
        elif args.command == "psi":
            _cmd_psi(args)
        elif args.command == "run":
            result = run_experiment(_experiment(args, args.algo, args.out))
            print(result.summary_text())
        elif args.command == "compare":
            rows = compare_algorithms([_experiment(args, a) for a in args.algo])
            print(format_comparison(rows))
        elif args.command == "replay-paper":
            result, _ = replay_paper_example()
            print(format_replay(result))
    except (ValueError, OSError, EnumerationCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
