"""Command-line front end: analyze a variety file or verify catalog entries.

Reports are reproducible by construction: they embed the seed, both prime
moduli, the trial count and a hash of the spec tree, and serializing with
sorted keys makes reruns byte-identical for identical inputs.

Exit codes: 0 success / skipped-not-constructible, 1 parse error,
2 sampler exhaustion, 3 catalog mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import catalog as cat
from . import hilbert, terracini
from .linalg import derive_rng, make_contexts
from .mpoly import PolyParseError
from .variety import (SampleExhausted, SpecParseError, VarietySpec,
                      loads_spec, spec_hash)


@dataclass
class RunConfig:
    seed: int = 0
    trials: int = terracini.DEFAULT_TRIALS
    prime_bits: int = 62
    primes_per_run: int = 2
    fmt: str = "json"
    out: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.prime_bits != 62:
            raise ValueError("prime_bits is fixed at 62")


def _write_report(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    tmp = Path(out).with_suffix(Path(out).suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, out)
    print(f"wrote {out}")


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _markdown_report(rep: dict) -> str:
    lines = ["# secant analysis report", ""]
    order = ["spec_hash", "seed", "primes", "trials", "ambient_r", "dim_n",
             "chain", "sigma_k", "delta_k", "n_k", "m_k", "contact_shape",
             "h1", "h2", "pass", "mismatches"]
    lines.append("| field | value |")
    lines.append("| --- | --- |")
    for key in order:
        if key in rep:
            lines.append(f"| {key} | {rep[key]} |")
    lines.append("")
    return "\n".join(lines)


def _measure(spec: VarietySpec, k: int, k_max: int, cfg: RunConfig) -> dict:
    ctxs = make_contexts(cfg.seed, cfg.primes_per_run, cfg.prime_bits)
    rng = derive_rng(cfg.seed, "analysis")
    scan = terracini.min_defective_scan(spec, k_max, ctxs, rng, cfg.trials)
    top = scan.reports[k]
    if k >= 1 and scan.reports[k].chain[k - 1] < top.r:
        tan = terracini.tangential_projection(spec, k, ctxs, rng)
        shape = terracini.contact_shape(spec, k, ctxs, rng, cfg.trials)
        n_k, m_k = tan.n_k, tan.m_k
    else:
        # Tangent spans already fill the ambient space: nothing to project.
        shape = terracini.ContactShape("Indeterminate", 0)
        n_k = m_k = None
    rep = {
        "spec_hash": spec_hash(spec),
        "seed": cfg.seed,
        "primes": [c.p for c in ctxs],
        "trials": cfg.trials,
        "ambient_r": top.r,
        "dim_n": spec.dim,
        "chain": scan.reports[k_max].chain,
        "sigma_k": top.sigma_k,
        "delta_k": top.delta_k,
        "n_k": n_k,
        "m_k": m_k,
        "contact_shape": shape.classification,
        "mismatches": [],
    }
    hrep = hilbert.hilbert_report(spec, ctxs, rng)
    rep["h1"] = hrep.h1
    rep["h2"] = hrep.h2
    return rep


def cmd_analyze(args) -> int:
    cfg = RunConfig(seed=args.seed, trials=args.trials, fmt=args.format, out=args.out)
    try:
        spec = loads_spec(Path(args.specfile).read_text(encoding="utf-8"))
    except (OSError, SpecParseError, PolyParseError, ValueError) as exc:
        print(f"error: cannot load {args.specfile}: {exc}", file=sys.stderr)
        return 1
    k = args.k if args.k is not None else (args.k_max if args.k_max is not None else 1)
    k_max = args.k_max if args.k_max is not None else k
    if k > k_max:
        print("error: --k cannot exceed --k-max", file=sys.stderr)
        return 1
    try:
        rep = _measure(spec, k, k_max, cfg)
    except SampleExhausted as exc:
        print(f"error: sampling failed: {exc}", file=sys.stderr)
        return 2
    text = _json_text(rep) if cfg.fmt == "json" else _markdown_report(rep)
    _write_report(text, cfg.out)
    return 0


def _entry_report(res: cat.VerifyResult, cfg: RunConfig) -> dict:
    entry = res.entry
    k = entry.k_eval
    top = res.scan.reports[k]
    rep = {
        "family": entry.family,
        "k": entry.k,
        "variant": entry.variant,
        "spec_hash": spec_hash(entry.spec),
        "seed": cfg.seed,
        "primes": top.primes,
        "trials": top.trials,
        "ambient_r": top.r,
        "dim_n": entry.spec.dim,
        "chain": res.scan.reports[-1].chain,
        "sigma_k": top.sigma_k,
        "delta_k": top.delta_k,
        "n_k": res.tangential.n_k,
        "m_k": res.tangential.m_k,
        "pass": res.passed,
        "mismatches": res.mismatches,
    }
    return rep


def cmd_catalog(args) -> int:
    cfg = RunConfig(seed=args.seed, trials=args.trials, fmt=args.format, out=args.out)
    if args.catalog_cmd == "list":
        rows = []
        for family in cat.FAMILIES:
            rows.append({
                "family": family,
                "constructible_k": list(cat.FAMILY_DOMAINS.get(family, ())),
                "variants": list(cat.FAMILY_VARIANTS.get(family, ("default",))),
                "constructible": family not in cat.NOT_CONSTRUCTIBLE_REASONS,
                "note": cat.FAMILY_NOTES.get(
                    family, cat.NOT_CONSTRUCTIBLE_REASONS.get(family, "")),
            })
        _write_report(_json_text(rows), cfg.out)
        return 0

    ctxs = make_contexts(cfg.seed, cfg.primes_per_run, cfg.prime_bits)
    if args.catalog_cmd == "verify":
        try:
            entry = cat.build_family(args.family, args.k, args.variant)
        except cat.NotConstructible as exc:
            print(f"{args.family} k={args.k}: skipped (not constructible: {exc})")
            return 0
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        try:
            res = cat.verify_family(entry, ctxs, derive_rng(cfg.seed, "verify",
                                                            args.family, args.k,
                                                            entry.variant), cfg.trials)
        except SampleExhausted as exc:
            print(f"error: sampling failed: {exc}", file=sys.stderr)
            return 2
        rep = _entry_report(res, cfg)
        text = _json_text(rep) if cfg.fmt == "json" else _markdown_report(rep)
        _write_report(text, cfg.out)
        print(f"{entry.family} k={entry.k} variant={entry.variant}: "
              + ("pass" if res.passed else f"FAIL {res.mismatches}"))
        return 0 if res.passed else 3

    # verify-all
    lo, hi = args.k_range
    try:
        results = cat.verify_all(range(lo, hi + 1), ctxs, trials=cfg.trials,
                                 seed=cfg.seed)
    except SampleExhausted as exc:
        print(f"error: sampling failed: {exc}", file=sys.stderr)
        return 2
    reports = []
    all_ok = True
    for res in results:
        if isinstance(res, cat.SkippedFamily):
            reports.append({"family": res.family, "k": res.k, "skipped": True,
                            "reason": res.reason})
            print(f"{res.family} k={res.k}: skipped ({res.reason})")
            continue
        rep = _entry_report(res, cfg)
        reports.append(rep)
        status = "pass" if res.passed else f"FAIL {res.mismatches}"
        print(f"{res.entry.family} k={res.entry.k} variant={res.entry.variant}: {status}")
        all_ok = all_ok and res.passed
    _write_report(_json_text(reports), cfg.out)
    return 0 if all_ok else 3


def _parse_k_range(text: str) -> tuple[int, int]:
    parts = text.split("..")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("k range looks like 2..4")
    return int(parts[0]), int(parts[1])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="secantry",
                                 description="Exact randomized secant-variety analysis "
                                             "over 62-bit prime fields.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--trials", type=int, default=terracini.DEFAULT_TRIALS)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "markdown"), default="json")
        p.add_argument("--out", default=None, help="write the report here (atomic)")

    pa = sub.add_parser("analyze", help="analyze a .variety.json file")
    pa.add_argument("specfile")
    group = pa.add_mutually_exclusive_group()
    group.add_argument("--k", type=int, default=None, help="secancy order to report")
    pa.add_argument("--k-max", dest="k_max", type=int, default=None,
                    help="scan the whole chain up to this order")
    common(pa)
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("catalog", help="inspect or verify the family catalog")
    subc = pc.add_subparsers(dest="catalog_cmd", required=True)

    pl = subc.add_parser("list", help="list families and constructibility")
    common(pl)
    pl.set_defaults(func=cmd_catalog)

    pv = subc.add_parser("verify", help="verify one family at one k")
    pv.add_argument("--family", required=True)
    pv.add_argument("--k", type=int, required=True)
    pv.add_argument("--variant", default=None)
    common(pv)
    pv.set_defaults(func=cmd_catalog)

    pva = subc.add_parser("verify-all", help="verify every constructible entry")
    pva.add_argument("--k-range", type=_parse_k_range, default=(2, 4))
    common(pva)
    pva.set_defaults(func=cmd_catalog)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
