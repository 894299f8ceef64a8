"""Command-line surface: code construction, permutation sampling,
stability surveys, spectrum/bound analysis, and BLER campaigns.

Every subcommand is deterministic given its full flag set (seeds
included). Exit codes: 0 success, 2 configuration or file error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace

from .analysis import (
    KNOWN_PERMS,
    STABLE,
    UNKNOWN_PERMS,
    bound_points,
    bound_points_to_text,
    brute_weight_enum,
    formula_spectrum,
    known_perms_storage,
    low_weight_enum_scl,
    memory_requirements,
    spectrum_to_text,
)
from .autgroup import (
    group_from_name,
    group_size,
    perms_from_text,
    perms_to_text,
    sample_group,
    stability_survey,
)
from .codespec import (
    Constraint,
    build_constraint,
    constraint_from_text,
    constraint_to_text,
    count_stable_variants,
    make_spec,
    max_dynamic_count,
    stable_weight_classes,
)
from .exceptions import ConfigurationError, ResourceCapError
from .sim import DecoderSpec, points_to_csv, run_bler

_MATRIX_PRINT_MAX_N = 5  # print V/W up to length 32 without a flag


def _parse_variant(text: str) -> frozenset[int]:
    text = text.strip().lower()
    if text in ("", "none", "0"):
        return frozenset()
    try:
        return frozenset(int(part) for part in text.split(","))
    except ValueError:
        raise ConfigurationError(f"cannot parse variant {text!r}") from None


def _parse_ebn0(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ConfigurationError(f"cannot parse Eb/N0 grid {text!r}") from None


def _load_constraint(path: str) -> Constraint:
    with open(path) as fh:
        return constraint_from_text(fh.read())


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---- construct -------------------------------------------------------------


def cmd_construct(args) -> int:
    spec = make_spec(args.r, args.n)
    variant = _parse_variant(args.variant)
    c = build_constraint(spec, variant)
    vt = ",".join(str(i) for i in sorted(variant)) or "none"
    print(f"code R({spec.r},{spec.n})  N={spec.N}  K={spec.K}  rate={spec.rate:g}")
    print(f"variant {{{vt}}}  dynamic bits d={c.dynamic_count}"
          f"  max dynamic D={max_dynamic_count(spec)}")
    print(f"stable weight classes {set(stable_weight_classes(spec)) or '{}'}"
          f"  stable variants {count_stable_variants(spec)}")
    if args.show_matrices or spec.n <= _MATRIX_PRINT_MAX_N:
        print("V:")
        print(c.V.to_text())
        print("W:")
        print(c.W.to_text())
    if args.out:
        _write_text(args.out, constraint_to_text(c))
        print(f"constraint written to {args.out}")
    return 0


# ---- sample ----------------------------------------------------------------


def cmd_sample(args) -> int:
    gs = group_from_name(args.group, args.n)
    perms = sample_group(gs, args.count, args.seed)
    _write_text(args.out, perms_to_text(perms))
    if args.out and args.out != "-":
        print(f"{len(perms)} permutations from {args.group} (n={args.n}, "
              f"group size {group_size(gs)}) written to {args.out}")
    return 0


# ---- stability -------------------------------------------------------------


def cmd_stability(args) -> int:
    c = _load_constraint(args.constraint)
    gs = group_from_name(args.group, c.spec.n)
    rep = stability_survey(c, gs, args.samples, args.seed)
    mode = "exhaustive" if rep.exhaustive else "sampled"
    print(f"group {args.group} (n={c.spec.n}, size {group_size(gs)}), {mode}")
    print(f"checked {rep.checked}  stable {rep.stable}  fraction {rep.fraction:.4f}")
    for p in rep.counterexamples:
        print("counterexample:")
        print(perms_to_text([p]), end="")
    return 0


# ---- memory ----------------------------------------------------------------


def cmd_memory(args) -> int:
    spec = make_spec(args.r, args.n)
    variant = (_parse_variant(args.variant) if args.variant is not None
               else frozenset(stable_weight_classes(spec)))
    c = build_constraint(spec, variant)
    if args.perms:
        with open(args.perms) as fh:
            perms = perms_from_text(fh.read())
        if len(perms) != args.m:
            raise ConfigurationError(
                f"permutation file holds {len(perms)}, expected M={args.m}")
    else:
        perms = sample_group(group_from_name("stable", args.n), args.m, args.seed)
    stable_bits = memory_requirements(spec, args.m, STABLE)
    known_bits = memory_requirements(spec, args.m, KNOWN_PERMS,
                                     constraint=c, perms=perms)
    _, known_nonzero = known_perms_storage(c, perms)
    unknown_bits = memory_requirements(spec, args.m, UNKNOWN_PERMS)
    vt = ",".join(str(i) for i in sorted(variant)) or "none"
    print(f"code R({args.r},{args.n})  M={args.m}  variant {{{vt}}}")
    print(f"{STABLE:>14}: {stable_bits}")
    print(f"{KNOWN_PERMS:>14}: {known_bits} (row bits; {known_nonzero} nonzero)")
    print(f"{UNKNOWN_PERMS:>14}: {unknown_bits}")
    return 0


# ---- analyze ---------------------------------------------------------------


def cmd_analyze(args) -> int:
    c = _load_constraint(args.constraint)
    if args.method == "brute":
        ws = brute_weight_enum(c)
    elif args.method == "scl":
        ws = low_weight_enum_scl(c, L=args.list_size, w_max=args.w_max)
    elif args.method == "formula":
        # Minimum-weight row of the plain code; ignores the variant.
        ws = formula_spectrum(c.spec.r, c.spec.n)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigurationError(f"unknown method {args.method!r}")
    print(spectrum_to_text(ws), end="")
    if args.ebn0:
        grid = [float(x) for x in args.ebn0.split(",")]
        pts = bound_points(ws, c.spec.rate, grid, w_max=args.w_max)
        print("# ebn0_db,union_bound")
        print(bound_points_to_text(pts), end="")
    return 0


# ---- simulate --------------------------------------------------------------


@dataclass(frozen=True)
class CampaignConfig:
    """One simulation campaign; JSON-file fields mirror these names."""

    r: int
    n: int
    variant: frozenset
    kind: str = "scl"
    list_size: int = 16
    branches: int = 8
    perm_source: str = "stable"
    perm_seed: int = 0
    perm_file: str | None = None
    ebn0: tuple = ()
    min_errors: int = 100
    max_trials: int = 1_000_000
    seed: int = 0
    workers: int = 1
    csv_out: str | None = None


def _campaign_from_file(path: str) -> CampaignConfig:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as err:
            raise ConfigurationError(f"campaign file is not valid JSON: {err}") from None
    try:
        code = raw["code"]
        cfg = CampaignConfig(
            r=int(code["r"]),
            n=int(code["n"]),
            variant=frozenset(int(i) for i in code.get("variant", [])),
            ebn0=tuple(float(e) for e in raw["ebn0"]),
        )
        dec = raw.get("decoder", {})
        stop = raw.get("stop", {})
        cfg = replace(
            cfg,
            kind=dec.get("kind", cfg.kind),
            list_size=int(dec.get("list_size", cfg.list_size)),
            branches=int(dec.get("branches", cfg.branches)),
            perm_source=dec.get("perm_source", cfg.perm_source),
            perm_seed=int(dec.get("perm_seed", cfg.perm_seed)),
            perm_file=dec.get("perm_file", cfg.perm_file),
            min_errors=int(stop.get("min_errors", cfg.min_errors)),
            max_trials=int(stop.get("max_trials", cfg.max_trials)),
            seed=int(raw.get("seed", cfg.seed)),
            workers=int(raw.get("workers", cfg.workers)),
            csv_out=raw.get("csv_out", cfg.csv_out),
        )
    except KeyError as missing:
        raise ConfigurationError(f"campaign file lacks {missing}") from None
    except (AttributeError, TypeError, ValueError) as err:
        raise ConfigurationError(f"campaign file is malformed: {err}") from None
    return cfg


def _campaign_apply_flags(cfg: CampaignConfig, args) -> CampaignConfig:
    updates = {}
    for flag, field_name, conv in (
        ("r", "r", int),
        ("n", "n", int),
        ("variant", "variant", _parse_variant),
        ("decoder", "kind", str),
        ("list_size", "list_size", int),
        ("branches", "branches", int),
        ("perm_source", "perm_source", str),
        ("perm_seed", "perm_seed", int),
        ("perm_file", "perm_file", str),
        ("ebn0", "ebn0", _parse_ebn0),
        ("min_errors", "min_errors", int),
        ("max_trials", "max_trials", int),
        ("seed", "seed", int),
        ("workers", "workers", int),
        ("csv_out", "csv_out", str),
    ):
        value = getattr(args, flag)
        if value is not None:
            updates[field_name] = conv(value)
    return replace(cfg, **updates)


def _campaign_decoder(cfg: CampaignConfig) -> DecoderSpec:
    kind = cfg.kind.lower()
    if kind == "sc":
        return DecoderSpec("scl", L=1)
    if kind == "scl":
        return DecoderSpec("scl", L=cfg.list_size)
    if kind != "ae":
        raise ConfigurationError(f"unknown decoder kind {cfg.kind!r}")
    if cfg.perm_file:
        with open(cfg.perm_file) as fh:
            perms = perms_from_text(fh.read())
    else:
        gs = group_from_name(cfg.perm_source, cfg.n)
        perms = sample_group(gs, cfg.branches, cfg.perm_seed)
    return DecoderSpec("ae", L=cfg.list_size, perms=perms)


def _run_campaign(cfg: CampaignConfig) -> int:
    if not cfg.ebn0:
        raise ConfigurationError("campaign has no Eb/N0 points")
    c = build_constraint(make_spec(cfg.r, cfg.n), cfg.variant)
    decoder = _campaign_decoder(cfg)
    points = run_bler(
        c,
        decoder,
        cfg.ebn0,
        min_errors=cfg.min_errors,
        max_trials=cfg.max_trials,
        seed=cfg.seed,
        workers=cfg.workers,
    )
    vt = ",".join(str(i) for i in sorted(cfg.variant)) or "none"
    label = f"R({cfg.r},{cfg.n})/{{{vt}}}/{decoder.label()}"
    _write_text(cfg.csv_out, points_to_csv(points, label))
    if cfg.csv_out and cfg.csv_out != "-":
        print(f"results written to {cfg.csv_out}")
    return 0


def cmd_simulate(args) -> int:
    if args.campaign:
        cfg = _campaign_from_file(args.campaign)
    else:
        cfg = CampaignConfig(r=0, n=0, variant=frozenset())
        if args.r is None or args.n is None or args.ebn0 is None:
            raise ConfigurationError(
                "simulate needs --campaign or at least --r, --n and --ebn0")
    cfg = _campaign_apply_flags(cfg, args)
    return _run_campaign(cfg)


# ---- repro -----------------------------------------------------------------


def _repro_memory_table(args) -> int:
    # The known-perms column samples LTA members: permutations outside
    # the stable group are the case that forces per-branch storage.
    print("memory bits per scenario, M=8 (known-perms: LTA sample, seed 0)")
    print(f"{'code':>8} {STABLE:>8} {KNOWN_PERMS:>24} {UNKNOWN_PERMS:>14}")
    for r, n in ((3, 7), (3, 8), (4, 8), (5, 8)):
        spec = make_spec(r, n)
        c = build_constraint(spec, frozenset(stable_weight_classes(spec)))
        perms = sample_group(group_from_name("lta", n), 8, seed=0)
        row_bits, nonzeros = known_perms_storage(c, perms)
        known = f"{row_bits} ({nonzeros} nonzero)"
        print(f"R({r},{n}):  {memory_requirements(spec, 8, STABLE):>7} "
              f"{known:>24} {memory_requirements(spec, 8, UNKNOWN_PERMS):>14}")
    return 0


def _repro_weight_table(args) -> int:
    spec = make_spec(3, 7)
    print("low-weight spectrum estimates, R(3,7), L=2^14")
    for name, variant in (("V_D", frozenset({1, 2, 3})), ("V_d", frozenset({3}))):
        c = build_constraint(spec, variant)
        ws = low_weight_enum_scl(c, L=1 << 14, w_max=20)
        counts = " ".join(f"A_{w}>={ws.counts[w]}" for w in sorted(ws.counts) if w)
        print(f"{name}: {counts} (lower bounds; exact={ws.exact})")
    print(f"V_0: A_16={formula_spectrum(3, 7).count(16)} (closed form)")
    return 0


def _repro_bound_points(args) -> int:
    spec = make_spec(3, 7)
    grid = [2.0, 2.5, 3.0, 3.5, 4.0]
    print("truncated union bounds from L=2^14 spectrum estimates, R(3,7)")
    print("# ebn0_db,union_bound")
    for name, variant in (("V_D", frozenset({1, 2, 3})), ("V_d", frozenset({3}))):
        c = build_constraint(spec, variant)
        ws = low_weight_enum_scl(c, L=1 << 14, w_max=20)
        print(f"# {name}")
        print(bound_points_to_text(bound_points(ws, spec.rate, grid)), end="")
    return 0


def _repro_bler_sample(args) -> int:
    spec = make_spec(3, 7)
    c_d = build_constraint(spec, frozenset({3}))
    c_0 = build_constraint(spec, frozenset())
    perms = sample_group(group_from_name("stable", 7), 8, seed=0)
    print("R(3,7) at 2.5 dB, 30 errors per point (quick sample)")
    print(points_to_csv(
        run_bler(c_d, DecoderSpec("scl", L=16), [2.5], min_errors=30, seed=1),
        "R(3,7)/{3}/scl-16"), end="")
    for label, c in (("R(3,7)/{3}", c_d), ("R(3,7)/none", c_0)):
        pts = run_bler(c, DecoderSpec("ae", L=16, perms=perms), [2.5],
                       min_errors=30, seed=1)
        body = points_to_csv(pts, f"{label}/ae-8-scl-16")
        print(body.split("\n", 1)[1], end="")
    return 0


_REPRO_TARGETS = {
    "memory-table": _repro_memory_table,
    "weight-table": _repro_weight_table,
    "bound-points": _repro_bound_points,
    "bler-sample": _repro_bler_sample,
}


def cmd_repro(args) -> int:
    return _REPRO_TARGETS[args.target](args)


# ---- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="rmae",
        description="Pre-transformed Reed-Muller codes with "
                    "permutation-ensemble list decoding.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code variant, print summary")
    p.add_argument("--r", type=int, required=True, help="Reed-Muller order")
    p.add_argument("--n", type=int, required=True, help="log2 block length")
    p.add_argument("--variant", default="none",
                   help="comma-separated weight classes, or 'none'")
    p.add_argument("--out", help="write constraint file here")
    p.add_argument("--show-matrices", action="store_true",
                   help="print V and W even for long codes")
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("sample", help="sample permutations from a group")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--group", default="stable",
                   help="stable | lta | ga | pl | identity | blta:... | blta-pl:...")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("stability", help="survey is_stable over a group")
    p.add_argument("--constraint", required=True, help="constraint file")
    p.add_argument("--group", default="stable")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser("memory", help="constraint storage under all scenarios")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=8, help="ensemble size M")
    p.add_argument("--variant", help="weight classes (default: all stable)")
    p.add_argument("--perms", help="permutation file for the known-perms row")
    p.add_argument("--seed", type=int, default=0,
                   help="sampling seed when --perms is absent")
    p.set_defaults(fn=cmd_memory)

    p = sub.add_parser("analyze", help="weight spectrum and union bounds")
    p.add_argument("--constraint", required=True, help="constraint file")
    p.add_argument("--method", choices=("brute", "scl", "formula"),
                   default="scl")
    p.add_argument("--list-size", type=int, default=1 << 14,
                   help="list size for the scl method")
    p.add_argument("--w-max", type=int, default=20)
    p.add_argument("--ebn0", help="comma-separated dB grid for bound points")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("simulate", help="run a BLER campaign")
    p.add_argument("--campaign", help="JSON campaign file; flags override")
    p.add_argument("--r", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--variant")
    p.add_argument("--decoder", help="sc | scl | ae")
    p.add_argument("--list-size", type=int, dest="list_size")
    p.add_argument("--branches", type=int, help="ensemble size M")
    p.add_argument("--perm-source", dest="perm_source", help="group name")
    p.add_argument("--perm-seed", type=int, dest="perm_seed")
    p.add_argument("--perm-file", dest="perm_file")
    p.add_argument("--ebn0", help="comma-separated dB grid")
    p.add_argument("--min-errors", type=int, dest="min_errors")
    p.add_argument("--max-trials", type=int, dest="max_trials")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--csv-out", dest="csv_out", help="file or - for stdout")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("repro", help="canned end-to-end recipes")
    p.add_argument("target", choices=sorted(_REPRO_TARGETS))
    p.set_defaults(fn=cmd_repro)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except ResourceCapError as err:
        print(f"resource cap: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"file error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
