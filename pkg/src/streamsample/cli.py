"""Command-line sampler for delimited text.

Rows are sampled whole: the weight column is parsed but the payload is the
full original line, so output records are byte-identical to input records.
Quoting and escaping are not interpreted; a delimiter inside quotes still
splits the row (documented limitation).

Exit codes: 0 success, 1 I/O failure, 2 malformed row or usage error,
3 empty input.

``streamsample bench ...`` dispatches to the benchmark harness.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .basic import BernoulliSampler
from .core import EmptyStreamError, fresh_seed
from .heap import HeapSampler
from .merge import parallel_sample, two_pass_sample
from .skip import SkipSampler

__all__ = ["main", "run_cli", "CliError"]

_SAMPLERS = {"basic": BernoulliSampler, "heap": HeapSampler, "skip": SkipSampler}
ALGORITHMS = ("basic", "heap", "skip", "parallel-skip", "two-pass")


class CliError(Exception):
    """Failure with a shell exit code attached."""

    def __init__(self, code: int, message: str) -> None:
        self.code = code
        super().__init__(message)


@dataclass
class _Reader:
    """Iterate (row, weight) pairs from one delimited input, validating.

    Reads each input exactly once, front to back.  Counts consumed rows
    and weight on the fly so the verbose summary needs no second pass.
    """

    path: str
    delimiter: str
    weight_col: int | str
    lenient_zero: bool
    rows_read: int = 0
    weight_sum: float = 0.0
    skipped: int = 0
    _col_index: int | None = field(default=None, repr=False)

    def _resolve_column(self, header_parts: list[str]) -> int:
        try:
            return header_parts.index(self.weight_col)
        except ValueError:
            raise CliError(
                2,
                f"{self.display_name}, line 1: no column named "
                f"{self.weight_col!r} in header",
            ) from None

    @property
    def display_name(self) -> str:
        return "<stdin>" if self.path == "-" else self.path

    def __iter__(self) -> Iterator[tuple[str, float]]:
        if self.path == "-":
            yield from self._iter_handle(sys.stdin)
        else:
            try:
                fh = open(self.path, "r", encoding="utf-8", newline="")
            except OSError as exc:
                raise CliError(1, f"cannot open {self.path}: {exc}") from exc
            with fh:
                yield from self._iter_handle(fh)

    def _iter_handle(self, fh) -> Iterator[tuple[str, float]]:
        col = self._col_index
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if col is None:
                if isinstance(self.weight_col, int):
                    col = self.weight_col - 1
                else:
                    col = self._resolve_column(line.split(self.delimiter))
                    self._col_index = col
                    continue  # header row is not a sample candidate
                self._col_index = col
            parts = line.split(self.delimiter)
            if col >= len(parts):
                raise CliError(
                    2,
                    f"{self.display_name}, line {lineno}: row has "
                    f"{len(parts)} columns, weight column {col + 1} missing",
                )
            try:
                w = float(parts[col])
            except ValueError:
                raise CliError(
                    2,
                    f"{self.display_name}, line {lineno}: weight "
                    f"{parts[col]!r} is not a number",
                ) from None
            if w == 0.0 and self.lenient_zero:
                self.skipped += 1
                continue
            if not (w > 0.0) or w == float("inf"):
                raise CliError(
                    2,
                    f"{self.display_name}, line {lineno}: weight {parts[col]!r} "
                    "must be a positive finite number",
                )
            self.rows_read += 1
            self.weight_sum += w
            yield line, w


def _parse_args(argv: Sequence[str]):
    import argparse

    parser = argparse.ArgumentParser(
        prog="streamsample",
        description="Weighted with-replacement sampling of delimited rows.",
        epilog="Use 'streamsample bench --help' for the benchmark harness.",
    )
    parser.add_argument("inputs", nargs="*", default=["-"],
                        help="input files, '-' for standard input (default)")
    parser.add_argument("--algo", default="skip", choices=ALGORITHMS,
                        help="sampling algorithm (default: skip)")
    parser.add_argument("-m", "--sample-size", type=int, required=True,
                        help="reservoir size")
    parser.add_argument("--seed", type=int, default=None,
                        help="64-bit seed; fresh entropy when omitted")
    parser.add_argument("--weight-col", required=True,
                        help="1-based column index, or a column name "
                             "(a name makes the first row of each input a header)")
    parser.add_argument("--delimiter", default="\t",
                        help=r"field delimiter (default tab; '\t' accepted)")
    parser.add_argument("--lenient-zero", action="store_true",
                        help="skip zero-weight rows instead of failing")
    parser.add_argument("--output", default="-",
                        help="output path, '-' for standard output")
    parser.add_argument("--verbose", action="store_true",
                        help="append a '#'-prefixed summary line")
    args = parser.parse_args(argv)

    if args.sample_size < 1:
        parser.error("sample size must be a positive integer")
    if args.delimiter == "\\t":
        args.delimiter = "\t"
    col = args.weight_col
    try:
        col = int(col)
    except ValueError:
        pass
    else:
        if col < 1:
            parser.error("--weight-col index is 1-based and must be >= 1")
    args.weight_col = col
    return args


def run_cli(args) -> tuple[list, dict]:
    """Execute a parsed invocation; returns (reservoir, summary fields)."""
    seed = fresh_seed() if args.seed is None else int(args.seed)
    readers = [
        _Reader(path, args.delimiter, args.weight_col, args.lenient_zero)
        for path in args.inputs
    ]
    m = args.sample_size

    if args.algo in _SAMPLERS:
        sampler = _SAMPLERS[args.algo](m, seed)
        for reader in readers:
            sampler.consume(iter(reader))
        try:
            reservoir = sampler.sample()
        except EmptyStreamError:
            raise CliError(3, "empty input: no rows to sample") from None
    elif args.algo == "parallel-skip":
        try:
            reservoir = parallel_sample(
                [iter(r) for r in readers], m, seed=seed, parallel=True
            )
        except ValueError as exc:
            raise CliError(3, f"empty input: {exc}") from None
    else:  # two-pass
        slices = [list(r) for r in readers]
        if any(not s for s in slices):
            raise CliError(3, "empty input: a slice has no rows")
        reservoir = two_pass_sample(slices, m, seed)

    summary = {
        "algorithm": args.algo,
        "seed": seed,
        "items": sum(r.rows_read for r in readers),
        "total_weight": sum(r.weight_sum for r in readers),
        "skipped_zero_weights": sum(r.skipped for r in readers),
    }
    return reservoir, summary


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "bench":
        from .bench import main as bench_main

        return bench_main(argv[1:])
    args = _parse_args(argv)
    try:
        reservoir, summary = run_cli(args)
    except CliError as exc:
        print(f"streamsample: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"streamsample: {exc}", file=sys.stderr)
        return 1

    lines = [str(row) for row in reservoir]
    if args.verbose:
        lines.append(
            "# algorithm={algorithm} seed={seed} items={items} "
            "total_weight={total_weight} "
            "skipped_zero_weights={skipped_zero_weights}".format(**summary)
        )
    text = "\n".join(lines) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"streamsample: {exc}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
