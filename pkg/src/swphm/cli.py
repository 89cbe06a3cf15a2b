"""Command-line surface for the prognosis pipeline.

Thresholds are given in seconds here (the usual way to talk about response
time limits) and converted to milliseconds internally. All randomness is
seeded; identical inputs and seed produce byte-identical output files.

Exit codes: 0 success, 1 validation/domain error, 2 usage error. On
failure, one machine-parseable line ``error: <code>`` goes to stdout and
the human-readable message goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from swphm import pipeline
from swphm.errors import SwphmError, ValidationError
from swphm.ingest import (
    dump_json,
    item_to_record,
    load_dataset,
    parse_backlog,
    write_backlog,
    write_releases,
)
from swphm.model import BacklogItem, Dataset, EnvironmentSpec
from swphm.prognosis import (
    DEFAULT_CLOCK_COEFFICIENT,
    EnvAdjustment,
    adjust_clock_speed,
    apply_env,
    estimate_os_factor,
)
from swphm.regression import predict_rt
from swphm.simulate import SimConfig, generate_dataset, write_simulated
from swphm.textclassify import classify_nb, load_nb, save_nb, tokenize, train_nb
from swphm.weighting import load_impact_table

DEFAULT_SEED = 42


def _default_seed() -> int:
    env_seed = os.environ.get("SWPHM_SEED")
    if env_seed is not None:
        try:
            return int(env_seed)
        except ValueError:
            raise ValidationError(
                f"SWPHM_SEED must be an integer, got {env_seed!r}", code="invalid-seed"
            ) from None
    return DEFAULT_SEED


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    print(text)


def _load_models(args) -> tuple:
    severity_model = load_nb(args.severity_model) if getattr(args, "severity_model", None) else None
    sizing_model = load_nb(args.sizing_model) if getattr(args, "sizing_model", None) else None
    table = load_impact_table(args.impact_table) if getattr(args, "impact_table", None) else None
    return table, severity_model, sizing_model


def _adjustment(args) -> EnvAdjustment:
    return EnvAdjustment(
        clock_coefficient=getattr(args, "clock_coeff", None) or DEFAULT_CLOCK_COEFFICIENT,
        os_factor_32_over_64=getattr(args, "os_factor", None),
    )


def _plan_inputs(args):
    trained = pipeline.load_trained(args.model)
    items = parse_backlog(args.backlog)
    items_by_id = {it.id: it for it in items}
    table, severity_model, sizing_model = _load_models(args)
    dataset = Dataset(items=items_by_id, releases=())
    weighted = pipeline.weigh_dataset(dataset, table, severity_model, sizing_model)
    payload = json.loads(Path(args.plan).read_text(encoding="utf-8"))
    spec, allocation = pipeline.build_plan_spec(payload, weighted, trained.baseline_env)
    return trained, items_by_id, weighted, spec, allocation


# -- subcommand handlers --------------------------------------------------

def _cmd_ingest(args) -> int:
    dataset = load_dataset(args.backlog, args.releases)
    if args.out_backlog:
        write_backlog(sorted(dataset.items.values(), key=lambda it: it.id), args.out_backlog)
    if args.out_releases:
        write_releases(list(dataset.releases), args.out_releases)
    _emit(
        {
            "items": len(dataset.items),
            "releases": len(dataset.releases),
            "measured_releases": len(dataset.measured_releases()),
        },
        None,
    )
    return 0


def _cmd_classify(args) -> int:
    items = parse_backlog(args.backlog)
    if args.mode == "train":
        docs = []
        for item in items:
            label = _label_of(item, args.field)
            if label is None:
                continue
            tokens = tokenize(item.text)
            if tokens:
                docs.append((tokens, label))
        model = train_nb(docs, alpha=args.alpha)
        save_nb(model, args.out)
        _emit({"classes": list(model.classes), "vocabulary_size": len(model.vocabulary), "documents": len(docs)}, None)
        return 0

    # apply: fill missing severity / story points; explicit data wins
    if args.field == "kind":
        raise ValidationError("kind is always explicit in the data; nothing to apply", code="invalid-field")
    model = load_nb(args.model)
    filled, records = 0, []
    for item in items:
        if args.field == "severity" and item.severity is None:
            label = classify_nb(model, tokenize(item.text)).label
            item = BacklogItem(**{**_item_kwargs(item), "severity": label})
            filled += 1
        elif args.field == "size" and item.story_points is None:
            label = classify_nb(model, tokenize(item.text)).label
            item = BacklogItem(**{**_item_kwargs(item), "story_points": int(label)})
            filled += 1
        records.append(item)
    write_backlog(records, args.out)
    _emit({"filled": filled, "items": len(records)}, None)
    return 0


def _label_of(item: BacklogItem, field: str) -> str | None:
    if field == "kind":
        return item.kind
    if field == "severity":
        return item.severity
    if item.story_points is None:
        return None
    return str(item.story_points)


def _item_kwargs(item: BacklogItem) -> dict:
    return {
        "id": item.id,
        "title": item.title,
        "description": item.description,
        "kind": item.kind,
        "severity": item.severity,
        "story_points": item.story_points,
        "sign": item.sign,
    }


def _cmd_weigh(args) -> int:
    dataset = load_dataset(args.backlog, args.releases)
    table, severity_model, sizing_model = _load_models(args)
    weighted = pipeline.weigh_dataset(dataset, table, severity_model, sizing_model)
    rows = pipeline.release_weight_table(dataset, weighted)
    if args.format == "csv":
        lines = ["version,pv,cpv"] + [f"{r.version},{r.pv!r},{r.cpv!r}" for r in rows]
        text = "\n".join(lines) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        print(text, end="")
        return 0
    payload = [{"version": r.version, "pv": r.pv, "cpv": r.cpv} for r in rows]
    if args.out:
        dump_json(payload, args.out)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_cluster(args) -> int:
    from swphm.clustering import cluster_releases, save_cluster_model

    dataset = load_dataset(args.backlog, args.releases)
    table, severity_model, sizing_model = _load_models(args)
    weighted = pipeline.weigh_dataset(dataset, table, severity_model, sizing_model)
    model = cluster_releases(dataset, weighted, k=args.k, k_max=args.k_max, seed=args.seed)
    if args.out:
        save_cluster_model(model, args.out)
    _emit({"k": model.k, "assignments": model.assignments, "inertia": model.inertia}, None)
    return 0


def _cmd_train(args) -> int:
    dataset = load_dataset(args.backlog, args.releases)
    table, severity_model, sizing_model = _load_models(args)
    weighted = pipeline.weigh_dataset(dataset, table, severity_model, sizing_model)
    trained = pipeline.train_from_dataset(
        dataset,
        weighted,
        seed=args.seed,
        train_fraction=args.train_fraction,
        use_clusters=not args.no_clusters,
        k=args.k,
    )
    pipeline.save_trained(trained, args.out)
    _emit(trained.report or {}, None)
    return 0


def _cmd_predict(args) -> int:
    trained = pipeline.load_trained(args.model)
    _emit({"cpv": args.cpv, "rt_ms": predict_rt(trained.model, args.cpv)}, args.out)
    return 0


def _cmd_rul(args) -> int:
    trained, items_by_id, weighted, spec, allocation = _plan_inputs(args)
    if allocation is None:
        raise ValidationError(
            "plan file has no 'allocation'; run the plan subcommand to search for one",
            code="missing-allocation",
        )
    result = pipeline.evaluate_allocation(
        trained, items_by_id, weighted, spec, allocation,
        threshold_ms=args.threshold * 1000.0, adj=_adjustment(args),
    )
    if args.format == "csv":
        text = result.rul.to_csv()
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        print(text, end="")
        return 0
    _emit(result.rul.to_json(), args.out)
    return 0


def _cmd_plan(args) -> int:
    trained, items_by_id, weighted, spec, _ = _plan_inputs(args)
    result = pipeline.search_best_plan(
        trained, items_by_id, weighted, spec,
        threshold_ms=args.threshold * 1000.0, adj=_adjustment(args),
    )
    _emit(result.to_json(), args.out)
    return 0


def _cmd_adjust(args) -> int:
    if args.estimate_os_factor:
        pairs = json.loads(Path(args.estimate_os_factor).read_text(encoding="utf-8"))
        if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 for p in pairs
        ):
            raise ValidationError(
                "pairs file must be a JSON array of [rt32_ms, rt64_ms] pairs",
                code="malformed-file",
            )
        factor = estimate_os_factor([(float(a), float(b)) for a, b in pairs])
        _emit({"os_factor": factor, "pairs": len(pairs)}, args.out)
        return 0
    if args.rt is None or args.from_ghz is None or args.to_ghz is None:
        raise ValidationError(
            "adjust needs --rt, --from-ghz and --to-ghz (or --estimate-os-factor)",
            code="missing-flag",
        )
    coeff = args.coeff or DEFAULT_CLOCK_COEFFICIENT
    if args.from_bits or args.to_bits:
        if not (args.from_bits and args.to_bits):
            raise ValidationError("--from-bits and --to-bits go together", code="missing-flag")
        baseline = EnvironmentSpec(os_bits=args.from_bits, clock_ghz=args.from_ghz)
        target = EnvironmentSpec(os_bits=args.to_bits, clock_ghz=args.to_ghz)
        adj = EnvAdjustment(clock_coefficient=coeff, os_factor_32_over_64=args.os_factor)
        rt = apply_env(args.rt, baseline, target, adj)
    else:
        rt = adjust_clock_speed(args.rt, args.from_ghz, args.to_ghz, coeff)
    _emit({"rt_ms": rt}, args.out)
    return 0


def _cmd_simulate(args) -> int:
    env = EnvironmentSpec(os_bits=args.os_bits, clock_ghz=args.clock_ghz)
    cfg = SimConfig(
        n_releases=args.releases,
        slope_ms_per_wf=args.slope,
        intercept_ms=args.intercept,
        noise_std_ms=args.noise,
        items_per_release=(args.items_min, args.items_max),
        seed=args.seed,
        env=env,
        os_factor=args.os_factor if args.os_factor is not None else 1.25,
    )
    dataset, truth = generate_dataset(cfg)
    paths = write_simulated(dataset, truth, args.out)
    _emit({name: str(path) for name, path in paths.items()}, None)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from swphm.service import create_app

    app = create_app(state_dir=args.state_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swphm",
        description="Remaining-useful-life estimation for software systems over release cycles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p):
        p.add_argument("--impact-table", help="JSON file overriding the impact-factor table")
        p.add_argument("--severity-model", help="NB model for filling missing severities")
        p.add_argument("--sizing-model", help="NB model for filling missing story points")

    p = sub.add_parser("ingest", help="validate and normalize backlog/release files")
    p.add_argument("--backlog", required=True)
    p.add_argument("--releases", required=True)
    p.add_argument("--out-backlog")
    p.add_argument("--out-releases")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("classify", help="train or apply the naive Bayes text classifier")
    p.add_argument("--mode", choices=["train", "apply"], required=True)
    p.add_argument("--backlog", required=True)
    p.add_argument("--field", choices=["kind", "severity", "size"], required=True)
    p.add_argument("--model", help="trained classifier (apply mode)")
    p.add_argument("--alpha", type=float, default=1.0, help="Laplace smoothing (train mode)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("weigh", help="emit the per-release PV/CPV table")
    p.add_argument("--backlog", required=True)
    p.add_argument("--releases", required=True)
    add_model_flags(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_weigh)

    p = sub.add_parser("cluster", help="cluster analogous releases")
    p.add_argument("--backlog", required=True)
    p.add_argument("--releases", required=True)
    add_model_flags(p)
    p.add_argument("--k", type=int, help="fixed cluster count (default: silhouette choice)")
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("train", help="fit the RT regression and report statistics")
    p.add_argument("--backlog", required=True)
    p.add_argument("--releases", required=True)
    add_model_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--no-clusters", action="store_true", help="skip per-cluster models")
    p.add_argument("--k", type=int, help="fixed cluster count")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="predict RT at a CPV value")
    p.add_argument("--model", required=True)
    p.add_argument("--cpv", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_predict)

    def add_plan_flags(p):
        p.add_argument("--model", required=True, help="trained model file from `swphm train`")
        p.add_argument("--backlog", required=True)
        p.add_argument("--plan", required=True, help="plan JSON file")
        add_model_flags(p)
        p.add_argument("--threshold", type=float, default=10.0, help="RT threshold in seconds")
        p.add_argument("--os-factor", type=float, help="32-bit/64-bit RT ratio")
        p.add_argument("--clock-coeff", type=float, help="clock-speed coefficient (default 1.227)")
        p.add_argument("--out")

    p = sub.add_parser("rul", help="remaining useful life of a planned allocation")
    add_plan_flags(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_rul)

    p = sub.add_parser("plan", help="search for the allocation with the best RUL")
    add_plan_flags(p)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("adjust", help="environmental RT adjustment (clock speed, OS bits)")
    p.add_argument("--rt", type=float, help="RT to adjust, in ms")
    p.add_argument("--from-ghz", type=float)
    p.add_argument("--to-ghz", type=float)
    p.add_argument("--from-bits", type=int, choices=[32, 64])
    p.add_argument("--to-bits", type=int, choices=[32, 64])
    p.add_argument("--os-factor", type=float)
    p.add_argument("--coeff", type=float, help="clock coefficient (default 1.227)")
    p.add_argument("--estimate-os-factor", metavar="PAIRS_JSON",
                   help="estimate the OS factor from [rt32, rt64] pairs instead")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_adjust)

    p = sub.add_parser("simulate", help="generate a synthetic dataset with ground truth")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--releases", type=int, default=10)
    p.add_argument("--slope", type=float, default=100.0, help="ms per WF unit")
    p.add_argument("--intercept", type=float, default=2000.0, help="ms")
    p.add_argument("--noise", type=float, default=0.0, help="RT noise std in ms")
    p.add_argument("--items-min", type=int, default=3)
    p.add_argument("--items-max", type=int, default=6)
    p.add_argument("--os-bits", type=int, choices=[32, 64], default=64)
    p.add_argument("--clock-ghz", type=float, default=1.8)
    p.add_argument("--os-factor", type=float)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("serve", help="start the HTTP planning API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--state-dir", help="directory for persisted session state")
    p.add_argument("--ui-dir", help="static directory with the planner UI build")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", "absent") is None:
            args.seed = _default_seed()
        return args.func(args)
    except SwphmError as exc:
        print(f"error: {exc.code}")
        print(f"swphm: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
