"""Command-line interface: ``blockpatterns {classify,detect,gen,density,search,expect}``.

Exit status: 0 success, 1 usage or input error, 2 inconclusive search.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import density as dens
from . import expectation as expect
from . import generators as gens
from . import search as srch
from .patterns import (AntiPower, BlockSignature, LambdaAntiPower, PairBudget, Power, block_signature,
                       contains, equal_pair_count)
from .words import InfiniteWord, Word, WordError, factor, read_words

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--word", help="word text (digits/letters, or int:a,b,c)")
    p.add_argument("--file", help="file with one word per line ('-' for stdin)")


def _add_generator_params(p: argparse.ArgumentParser, prefix: str = "") -> None:
    flag = f"--{prefix}"
    p.add_argument(f"{flag}k" if prefix else "--k", dest="gen_k", help="generator order k")
    p.add_argument(f"{flag}sigma", dest="gen_sigma")
    p.add_argument(f"{flag}theta", dest="theta", help="angle: p/q or decimal")
    p.add_argument(f"{flag}x0", dest="x0")
    p.add_argument(f"{flag}prec", dest="prec", type=int, default=128)
    p.add_argument(f"{flag}preset", dest="preset", choices=gens.Angle.PRESETS)
    p.add_argument(f"{flag}variant", dest="variant", choices=("upper", "lower"), default="upper")
    p.add_argument(f"{flag}seed-words", dest="seed_words", help="sesquipower v_1,v_2,... (last repeats)")
    p.add_argument(f"{flag}gamma-base", dest="gamma_base", type=int)


def _generator_params(args) -> dict[str, str]:
    pairs = {"k": args.gen_k, "sigma": args.gen_sigma, "theta": args.theta, "x0": args.x0,
             "preset": args.preset, "variant": args.variant, "seed": args.seed_words,
             "gamma-base": args.gamma_base, "prec": args.prec}
    return {key: str(v) for key, v in pairs.items() if v is not None}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blockpatterns", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="block signature and equal-pair count")
    _add_input(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("detect", help="first factor that is a power / anti-power / budget pattern")
    _add_input(p)
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--power", type=int, metavar="L")
    kind.add_argument("--anti", type=int, metavar="K")
    kind.add_argument("--budget", metavar="K:SIGMA")
    p.add_argument("--lambda", dest="lam", type=int, help="with --anti: (K, lambda)-anti-powers")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gen", help="print a prefix of a named word")
    p.add_argument("name", choices=gens.GENERATOR_NAMES)
    p.add_argument("--len", dest="length", type=int)
    _add_generator_params(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("density", help="AP(x,k,lambda) or D(x,k,sigma) with density proxies")
    p.add_argument("--gen", required=True, choices=gens.GENERATOR_NAMES)
    _add_generator_params(p, prefix="gen-")
    p.add_argument("--k", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--lambda", dest="lam", type=int)
    group.add_argument("--sigma", type=int)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--window", type=int, help="first n of the proxy window (default ceil(nmax/2))")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("search", help="exhaustive threshold search")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--anti", type=int, required=True, metavar="K")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--lambda", dest="lam", type=int, default=None)
    group.add_argument("--budget", type=int, metavar="SIGMA")
    p.add_argument("--cap", type=int, help="maximum word length explored")
    p.add_argument("--timeout", type=float, help="seconds")
    p.add_argument("--threads", type=int, help="default: $BP_THREADS or CPU count")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("expect", help="expected number of block-patterns in a random word")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--mu", required=True, help="k=5;2:2,1:1 or 1,2,0,0,0")
    p.add_argument("--oracle", action="store_true", help="exact enumeration of all words")
    p.add_argument("--mc", type=int, metavar="TRIALS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    return parser


def _input_words(args, stdin) -> list[Word]:
    if args.word is not None and args.file is not None:
        raise UsageError("give either --word or --file, not both")
    if args.word is not None:
        return [Word.parse(args.word)]
    if args.file is not None and args.file != "-":
        with open(args.file, encoding="utf-8") as fh:
            return read_words(fh)
    return read_words(stdin)


def _cmd_classify(args, stdin, out):
    rows = []
    for w in _input_words(args, stdin):
        sig = block_signature(w, args.k)
        rows.append({"word": str(w), "signature": str(sig), "mu": list(sig.mu),
                     "pairs": equal_pair_count(sig)})
    if args.json:
        out.write(json.dumps(rows[0] if len(rows) == 1 else rows) + "\n")
    else:
        for r in rows:
            out.write(f"signature {r['signature']} pairs={r['pairs']}\n")
    return EXIT_OK


def _detect_predicate(args):
    if args.lam is not None and args.anti is None:
        raise UsageError("--lambda needs --anti")
    if args.power is not None:
        return Power(args.power)
    if args.anti is not None:
        return AntiPower(args.anti) if args.lam in (None, 1) else LambdaAntiPower(args.anti, args.lam)
    k, sep, sigma = args.budget.partition(":")
    if not sep:
        raise UsageError("--budget expects K:SIGMA")
    return PairBudget(int(k), int(sigma))


def _cmd_detect(args, stdin, out):
    pred = _detect_predicate(args)
    rows = []
    for w in _input_words(args, stdin):
        hit = contains(w, pred)
        if hit is None:
            rows.append({"word": str(w), "match": None})
        else:
            start, m = hit
            text = str(factor(w, start, start + pred.k * m - 1))
            rows.append({"word": str(w), "match": {"start": start, "m": m, "factor": text}})
    if args.json:
        out.write(json.dumps(rows[0] if len(rows) == 1 else rows) + "\n")
    else:
        for r in rows:
            mt = r["match"]
            out.write("none\n" if mt is None else f"start={mt['start']} m={mt['m']} factor={mt['factor']}\n")
    return EXIT_OK


def _cmd_gen(args, stdin, out):
    made = gens.build(args.name, _generator_params(args))
    if isinstance(made, InfiniteWord):
        if args.length is None:
            raise UsageError(f"{args.name} is infinite; give --len")
        word = made.prefix(args.length)
    else:
        word = made if args.length is None else made[:args.length]
    if args.json:
        out.write(json.dumps({"name": args.name, "length": len(word), "word": str(word)}) + "\n")
    else:
        out.write(f"{word}\n")
    return EXIT_OK


def _cmd_density(args, stdin, out):
    made = gens.build(args.gen, _generator_params(args))
    if not isinstance(made, InfiniteWord):
        raise UsageError(f"{args.gen} is a finite word; density needs an infinite one")
    if args.sigma is not None:
        s = dens.d_set(made, args.k, args.sigma, args.nmax)
    else:
        s = dens.ap_set(made, args.k, 1 if args.lam is None else args.lam, args.nmax)
    rep = dens.report(s, dens.density_estimate(s, args.window))
    if args.json:
        out.write(json.dumps(rep) + "\n")
    else:
        param = "lambda" if s.kind == "AP" else "sigma"
        out.write(f"{s.kind}(k={s.k},{param}={s.param}) n_max={s.n_max} "
                  f"members={','.join(map(str, s.members)) or '-'}\n")
        out.write(f"lower_proxy={rep['lower_proxy']:.6f} upper_proxy={rep['upper_proxy']:.6f}\n")
    return EXIT_OK


def _cmd_search(args, stdin, out):
    spec = srch.AvoidanceSpec(args.alpha, args.ell, args.anti,
                              lam=1 if args.lam is None else args.lam, sigma=args.budget)
    res = srch.max_avoiding_length(spec, args.cap, args.timeout, args.threads)
    if args.json:
        out.write(json.dumps(res.to_json()) + "\n")
    else:
        rel = ">=" if res.truncated else "="
        out.write(f"N{rel}{res.threshold} witness={res.witness} nodes={res.nodes_explored}"
                  + (" (truncated)" if res.truncated else "") + "\n")
    return EXIT_INCONCLUSIVE if res.truncated else EXIT_OK


def _cmd_expect(args, stdin, out):
    q = expect.ExpectationQuery(args.n, args.k, args.alpha, BlockSignature.parse(args.mu))
    rep = expect.report(q, oracle=args.oracle, trials=args.mc, seed=args.seed,
                        threads=srch._threads())
    if args.json:
        out.write(json.dumps(rep.to_json()) + "\n")
    else:
        out.write(f"closed_form={rep.closed_form!r}\n")
        if rep.oracle is not None:
            out.write(f"oracle={rep.oracle} ({float(rep.oracle)!r})\n")
        if rep.monte_carlo is not None:
            mc = rep.monte_carlo
            out.write(f"mc_mean={mc.mean!r} ci99={mc.ci99!r} trials={mc.trials} seed={mc.seed}\n")
    return EXIT_OK


COMMANDS = {
    "classify": _cmd_classify,
    "detect": _cmd_detect,
    "gen": _cmd_gen,
    "density": _cmd_density,
    "search": _cmd_search,
    "expect": _cmd_expect,
}


def run(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, stdin, stdout)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (WordError, ValueError, OSError) as exc:
        stderr.write(f"blockpatterns: error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
