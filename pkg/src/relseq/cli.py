"""
The ``relseq`` command line tool.

Subcommands: gen, whiten, train, rollout, eval, compare, gradcheck and
export. Data
sets, whitening transforms, checkpoints and rollouts are tensor containers;
training reports are JSON lines; images are binary PGM.
"""
import argparse
import json
import logging
import sys

import numpy as np

from relseq import DESCRIPTOR_KINDS
from relseq import GENERATOR_KINDS
from relseq import SEED_FRAMES
from relseq import __version__
from relseq import preprocess
from relseq.config import RunConfig
from relseq.config import load_run_config
from relseq.container import atomic_write
from relseq.container import read_container
from relseq.container import write_container
from relseq.core_math import Rng
from relseq.datagen import build_generator
from relseq.datagen.dataset import Dataset
from relseq.datagen.split import DEFAULT_FRACTIONS
from relseq.datagen.split import split_indices
from relseq.evaluation.compare import compare_objectives
from relseq.evaluation.descriptor import descriptor_matrix
from relseq.evaluation.logreg import DEFAULT_L2
from relseq.evaluation.logreg import accuracy
from relseq.evaluation.logreg import train_logreg
from relseq.evaluation.metrics import rollout_mse
from relseq.exception import ArgumentError
from relseq.exception import ContainerError
from relseq.exception import MissingPrerequisite
from relseq.exception import RelSeqError
from relseq.export import filter_pairs
from relseq.export import write_sequence
from relseq.model.hgae import HgaeParams
from relseq.model.hgae import params_from_arrays
from relseq.model.hgae import rollout
from relseq.training.gradcheck import SUITES
from relseq.training.gradcheck import run_gradcheck
from relseq.training.trainer import TrainConfig
from relseq.training.trainer import predictive_finetune
from relseq.training.trainer import pretrain_gae
from relseq.training.trainer import pretrain_hgae_layer2
from relseq.util import worker_count

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"
PHASES = ["pretrain-l1", "pretrain-l2", "finetune"]
SUBSETS = ["all", "train", "valid", "test"]

# Classifier defaults for eval.
LOGREG_DEFAULTS = {
    "learning_rate": 0.01,
    "momentum": 0.9,
    "epochs": 200,
    "batch_size": 100,
    "l2": DEFAULT_L2,
}


# ----------------------------------------------------------------------------
# Shared helpers


def _split_sizes(spec):
    parts = [p.strip() for p in spec.split(",") if p.strip()]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three sizes, got '{spec}'")
    try:
        if all(p.isdigit() for p in parts):
            return tuple(int(p) for p in parts)
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad split sizes '{spec}'")


def _fraction(val):
    try:
        f = float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: '{val}'")
    if not 0.0 < f <= 1.0:
        raise argparse.ArgumentTypeError(f"fraction must be in (0, 1], got {f}")
    return f


def _pick(value, fallback, what):
    if value:
        return value
    if fallback:
        return fallback
    raise ArgumentError(f"No {what} given")


def _run_config(args):
    if getattr(args, "config", None):
        return load_run_config(args.config)
    return RunConfig()


def load_dataset(path):
    arrays, meta = read_container(path)
    if "frames" not in arrays:
        raise ContainerError(f"No 'frames' array in {path}")
    return Dataset.from_dict(arrays, meta)


def load_whitening(path):
    arrays, meta = read_container(path)
    return preprocess.WhiteningTransform.from_dict(arrays, meta.get("retained_fraction"))


def load_checkpoint(path):
    arrays, meta = read_container(path)
    return params_from_arrays(arrays), meta


def select(dataset, subset, sizes, seed):
    """One part of the shuffled train/valid/test partition, or everything."""
    if subset == "all":
        return dataset
    parts = split_indices(len(dataset), sizes, Rng(seed))
    return dataset.subset(parts[SUBSETS.index(subset) - 1])


def to_model_space(frames, whitening):
    """(n, T, d_pixels) frames, whitened when a transform is given."""
    if whitening is None:
        return frames
    return preprocess.apply(whitening, frames)


def to_pixel_space(frames, whitening):
    if whitening is None:
        return frames
    return preprocess.invert(whitening, frames)


def _write_json(path, info):
    atomic_write(path, json.dumps(info, sort_keys=True, indent=2) + "\n")


def _add_split_args(parser, default_subset):
    parser.add_argument(
        "--subset", choices=SUBSETS, default=default_subset,
        help="part of the shuffled train/valid/test partition to use",
    )
    parser.add_argument(
        "--split", type=_split_sizes, default=DEFAULT_FRACTIONS,
        help="train,valid,test sizes as counts (100,20,50) or fractions",
    )
    parser.add_argument(
        "--split-seed", type=int, default=0, help="seed of the partition"
    )


# ----------------------------------------------------------------------------
# gen


def cmd_gen(args):
    generator = build_generator(
        args.kind,
        T=args.length,
        size=args.size,
        resolution=args.size,
        vel_range=args.vel_range,
        angle_range=args.angle_range,
        acc_range=args.acc_range,
        patches=args.patches,
        n_balls=args.n_balls,
        radius=args.radius,
        box_size=args.box_size,
        speed=args.speed,
        substeps=args.substeps,
    )
    dataset = generator.generate(Rng(args.seed), args.n, workers=worker_count())
    meta = dict(dataset.meta, tool="relseq", version=__version__)
    write_container(args.out, dataset.as_dict(), meta)
    logger.info("Data set of shape %s written to %s", dataset.frames.shape, args.out)
    return 0


# ----------------------------------------------------------------------------
# whiten


def cmd_whiten(args):
    dataset = select(load_dataset(args.data), args.subset, args.split, args.split_seed)
    pixels = dataset.frames.reshape(-1, dataset.frames.shape[2])
    transform = preprocess.fit_whitening(pixels, args.fraction, args.eps)
    meta = {
        "data": args.data,
        "subset": args.subset,
        "target_fraction": args.fraction,
        "retained_fraction": transform.retained_fraction,
        "eps": args.eps,
        "d_kept": transform.d_kept,
        "d_pixels": transform.d_pixels,
        "version": __version__,
    }
    arrays = transform.as_dict()
    write_container(args.out, arrays, meta, wide=tuple(arrays))
    return 0


# ----------------------------------------------------------------------------
# train


def _train_config(args, run):
    cfg = run.train.update(
        learning_rate=args.lr,
        momentum=args.momentum,
        epochs=args.epochs,
        batch_size=args.batch_size,
        l2=args.l2,
        seed=args.seed,
        horizon_schedule=args.horizon_schedule,
        max_grad_norm=args.max_grad_norm,
        init_std=args.init_std,
        determinism=False if args.nondeterministic else None,
    )
    model = run.model.update(
        depth=args.depth,
        factors=args.factors,
        mappings=args.mappings,
        factors2=args.factors2,
        mappings2=args.mappings2,
    )
    return cfg, model


def _require(meta, phase, path):
    done = meta.get("phases", [])
    if phase not in done:
        raise MissingPrerequisite(
            f"Checkpoint {path} has phases {done}, '{phase}' is required first"
        )


def _untrained_layer1(meta):
    runs = [h for h in meta.get("history", []) if h.get("phase") == "pretrain-l1"]
    return bool(runs) and all(h.get("final_loss") is None for h in runs)


def _previous(args, run, phase):
    path = args.ckpt or run.data.checkpoint
    if not path:
        raise MissingPrerequisite(f"Phase {phase} needs the checkpoint of an earlier phase")
    params, meta = load_checkpoint(path)
    return path, params, meta


def cmd_train(args):
    run = _run_config(args)
    cfg, model_cfg = _train_config(args, run)

    data_path = _pick(args.data, run.data.dataset, "data set")
    whitening_path = args.whitening or run.data.whitening
    dataset = select(load_dataset(data_path), args.subset, args.split, args.split_seed)
    whitening = load_whitening(whitening_path) if whitening_path else None
    frames = to_model_space(dataset.frames, whitening)

    history = []
    phases = []
    source = None
    if args.phase == "pretrain-l1":
        params, report = pretrain_gae(
            frames, cfg, model_cfg.factors, model_cfg.mappings
        )
    elif args.phase == "pretrain-l2":
        source, l1, meta = _previous(args, run, args.phase)
        _require(meta, "pretrain-l1", source)
        if isinstance(l1, HgaeParams):
            l1 = l1.layer1
        layer2, report = pretrain_hgae_layer2(
            l1, frames, cfg, model_cfg.factors2, model_cfg.mappings2
        )
        params = HgaeParams(l1, layer2)
        history, phases = meta.get("history", []), meta["phases"]
    else:
        source, params, meta = _previous(args, run, args.phase)
        _require(meta, "pretrain-l1", source)
        if _untrained_layer1(meta):
            logger.warning(
                "The first layer in %s was never trained; predictive training from the "
                "initialization rarely leaves the m=0.5 plateau", source,
            )
        if model_cfg.depth == 2 and params.depth == 1:
            raise MissingPrerequisite(
                f"A two layer finetune needs a pretrain-l2 checkpoint, {source} has one layer"
            )
        if args.depth == 1 and params.depth == 2:
            params = params.layer1
        params, report = predictive_finetune(params, frames, cfg)
        history, phases = meta.get("history", []), meta["phases"]

    meta = {
        "phases": phases + [args.phase],
        "depth": params.depth,
        "history": history + [
            {
                "phase": args.phase,
                "train": cfg.to_dict(),
                "model": model_cfg.to_dict(),
                "data": data_path,
                "subset": args.subset,
                "whitening": whitening_path,
                "checkpoint": source,
                "final_loss": report.losses[-1] if len(report) else None,
            }
        ],
        "version": __version__,
    }
    arrays = params.as_dict()
    write_container(args.out, arrays, meta, wide=tuple(arrays))
    report.checkpoint = args.out
    atomic_write(args.report or args.out + ".jsonl", report.to_jsonl())
    logger.info(
        "%s finished after %d epochs (%d steps)", args.phase, len(report), report.steps
    )
    return 0


# ----------------------------------------------------------------------------
# rollout


def cmd_rollout(args):
    run = _run_config(args)
    ckpts = args.ckpt or ([run.data.checkpoint] if run.data.checkpoint else [])
    if not ckpts:
        raise ArgumentError("No checkpoint given")
    data_path = _pick(args.data, run.data.dataset, "data set")
    whitening_path = args.whitening or run.data.whitening
    whitening = load_whitening(whitening_path) if whitening_path else None

    dataset = select(load_dataset(data_path), args.subset, args.split, args.split_seed)
    if args.n is not None:
        dataset = dataset.subset(np.arange(min(args.n, len(dataset))))
    frames = to_model_space(dataset.frames, whitening)

    models = [load_checkpoint(path)[0] for path in ckpts]
    # Seeds of every model end on the same frame so all predict the same steps.
    last_seed = max(SEED_FRAMES[p.depth] for p in models)
    if frames.shape[1] < last_seed:
        raise ArgumentError(
            f"Sequences of length {frames.shape[1]} have fewer than {last_seed} seed frames"
        )
    has_truth = frames.shape[1] >= last_seed + args.steps
    if not has_truth:
        logger.warning(
            "Sequences of length %d hold no ground truth for %d steps, skipping errors",
            frames.shape[1], args.steps,
        )

    arrays = {}
    results = []
    for i, (path, p) in enumerate(zip(ckpts, models)):
        s = SEED_FRAMES[p.depth]
        seeds = [frames[:, t, :].T for t in range(last_seed - s, last_seed)]
        predicted = rollout(p, seeds, args.steps)
        sequence = np.stack([f.T for f in seeds + predicted], axis=1)
        arrays[f"rollout{i}"] = to_pixel_space(sequence, whitening)

        info = {"checkpoint": path, "depth": p.depth, "seed_frames": s}
        if has_truth:
            truth = [frames[:, last_seed + j, :].T for j in range(args.steps)]
            info["mse"] = rollout_mse(predicted, truth, seeds[-1]).to_dict()
            logger.info(
                "%s: mean MSE %.4g, persistence %.4g",
                path, info["mse"]["mean"], info["mse"]["baseline_mean"],
            )
        results.append(info)

    meta = {
        "data": data_path,
        "whitening": whitening_path,
        "subset": args.subset,
        "steps": args.steps,
        "first_predicted_frame": last_seed,
        "results": results,
        "normalization": "per-sequence min-max",
        "version": __version__,
    }
    if args.out:
        write_container(args.out, arrays, meta)
    if args.metrics:
        _write_json(args.metrics, meta)
    if args.pgm_dir:
        for i in range(len(models)):
            for j in range(min(args.pgm_count, len(dataset))):
                write_sequence(args.pgm_dir, f"c{i}_s{j:03d}", arrays[f"rollout{i}"][j])
    print(json.dumps(results, sort_keys=True))
    return 0


# ----------------------------------------------------------------------------
# eval


def _descriptor_kinds(requested, params):
    if requested != "all":
        return [requested]
    if params.depth == 1:
        logger.warning("One layer checkpoint, skipping the m2 descriptor")
        return [k for k in DESCRIPTOR_KINDS if k != "m2"]
    return list(DESCRIPTOR_KINDS)


def cmd_eval(args):
    run = _run_config(args)
    ckpt = _pick(args.ckpt, run.data.checkpoint, "checkpoint")
    data_path = _pick(args.data, run.data.dataset, "data set")
    whitening_path = args.whitening or run.data.whitening

    params, _ = load_checkpoint(ckpt)
    kinds = _descriptor_kinds(args.descriptor, params)
    if "m2" in kinds and params.depth == 1:
        raise ArgumentError(f"Descriptor m2 needs a two layer model, {ckpt} has one layer")

    dataset = load_dataset(data_path)
    if not dataset.labeled:
        raise ArgumentError(f"Data set {data_path} has no labels")
    labels = dataset.labels
    if args.shuffle_labels:
        labels = labels[Rng(args.seed).substream(1).permutation(len(labels))]

    whitening = load_whitening(whitening_path) if whitening_path else None
    frames = to_model_space(dataset.frames, whitening)
    parts = split_indices(len(dataset), args.split, Rng(args.split_seed))
    cfg = TrainConfig(seed=args.seed, **{
        key: getattr(args, key) if getattr(args, key) is not None else val
        for key, val in LOGREG_DEFAULTS.items()
    })
    num_classes = int(labels.max()) + 1

    results = []
    for kind in kinds:
        X = descriptor_matrix(params, frames, kind)
        train, valid, test = ((X[p], labels[p]) for p in parts)
        classifier = train_logreg(train[0], train[1], cfg, num_classes)
        record = {"descriptor_kind": kind}
        for name, (_X, _y) in zip(("train", "valid", "test"), (train, valid, test)):
            record[f"{name}_acc"] = accuracy(classifier, _X, _y) if len(_y) else None
        logger.info(
            "%s: train %.4f valid %s test %s", kind, record["train_acc"],
            record["valid_acc"], record["test_acc"],
        )
        results.append(record)

    info = {
        "results": results,
        "checkpoint": ckpt,
        "data": data_path,
        "whitening": whitening_path,
        "split": [len(p) for p in parts],
        "split_seed": args.split_seed,
        "shuffle_labels": args.shuffle_labels,
        "classifier": cfg.to_dict(),
        "version": __version__,
    }
    if args.out:
        _write_json(args.out, info)
    print(json.dumps(results, sort_keys=True))
    return 0


# ----------------------------------------------------------------------------
# compare


def _seed_list(spec):
    try:
        seeds = [int(s) for s in spec.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list '{spec}'")
    if not seeds:
        raise argparse.ArgumentTypeError("no seeds given")
    return seeds


def cmd_compare(args):
    run = _run_config(args)
    data_path = _pick(args.data, run.data.dataset, "data set")
    whitening_path = args.whitening or run.data.whitening
    dataset = load_dataset(data_path)
    if not dataset.labeled:
        raise ArgumentError(f"Data set {data_path} has no labels")
    whitening = load_whitening(whitening_path) if whitening_path else None
    frames = to_model_space(dataset.frames, whitening)
    parts = split_indices(len(dataset), args.split, Rng(args.split_seed))

    cfg = run.train.update(
        learning_rate=args.lr,
        momentum=args.momentum,
        epochs=args.epochs,
        batch_size=args.batch_size,
        determinism=False if args.nondeterministic else None,
    )
    classifier_cfg = TrainConfig(seed=args.split_seed, **LOGREG_DEFAULTS)
    result = compare_objectives(
        frames, dataset.labels, parts, cfg, classifier_cfg,
        seeds=args.seeds,
        warmup_epochs=args.warmup_epochs,
        num_factors=args.factors or run.model.factors,
        num_mappings=args.mappings or run.model.mappings,
        min_gap=args.min_gap,
    )

    info = dict(
        result.to_dict(),
        data=data_path,
        whitening=whitening_path,
        split=[len(p) for p in parts],
        train=cfg.to_dict(),
        warmup_epochs=args.warmup_epochs,
        version=__version__,
    )
    if args.out:
        _write_json(args.out, info)
    print(json.dumps(
        {"mean_test_acc": info["mean_test_acc"], "gap_points": info["gap_points"],
         "passed": info["passed"]},
        sort_keys=True,
    ))
    if not result.passed:
        logger.error(
            "Predictive training leads by %.2f points, %.2f required", result.gap, args.min_gap
        )
        return 1
    return 0


# ----------------------------------------------------------------------------
# gradcheck


def cmd_gradcheck(args):
    results = run_gradcheck(
        args.paths, args.instances, args.tolerance, args.seed, fault=args.inject_fault
    )
    for r in results:
        print(
            "{:<14} max rel. error {:.3e} over {} instances  {}".format(
                r.path, r.max_rel_error, r.instances, "ok" if r.passed else "FAILED"
            )
        )
    if args.out:
        _write_json(args.out, {"results": [r.to_dict() for r in results]})
    failed = [r.path for r in results if not r.passed]
    if failed:
        logger.error("Gradient check failed for %s", ", ".join(failed))
        return 1
    return 0


# ----------------------------------------------------------------------------
# export


def cmd_export(args):
    if not (args.data or args.ckpt):
        raise ArgumentError("Nothing to export, give --data and/or --ckpt")

    if args.data:
        dataset = load_dataset(args.data)
        for j in range(min(args.n, len(dataset))):
            write_sequence(args.out_dir, f"seq{j:03d}", dataset.frames[j])

    if args.ckpt:
        params, _ = load_checkpoint(args.ckpt)
        l1 = params.layer1 if isinstance(params, HgaeParams) else params
        inverse = load_whitening(args.whitening).inverse if args.whitening else None
        pairs = filter_pairs(l1.U, l1.V, inverse)
        for f in range(min(args.filters, pairs.shape[0])):
            write_sequence(args.out_dir, f"filter{f:03d}", pairs[f])
    return 0


# ----------------------------------------------------------------------------
# Argument parsing


def _add_train_args(parser):
    parser.add_argument("--phase", choices=PHASES, required=True)
    parser.add_argument("--data", help="data set container")
    parser.add_argument("--whitening", help="whitening container")
    parser.add_argument("--ckpt", help="checkpoint of the previous phase")
    parser.add_argument("--out", required=True, help="checkpoint to write")
    parser.add_argument("--report", help="JSON lines report (default: <out>.jsonl)")
    parser.add_argument("--config", help="YAML or JSON run configuration")
    parser.add_argument(
        "--lr", type=float,
        help="learning rate (0.001 for pretraining, 0.0001 suits HGAE finetuning)",
    )
    parser.add_argument("--momentum", type=float)
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--batch-size", type=int)
    parser.add_argument("--l2", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument(
        "--horizon-schedule", help="epoch:k pairs of the prediction horizon, e.g. 0:1,400:2"
    )
    parser.add_argument("--max-grad-norm", type=float)
    parser.add_argument("--init-std", type=float)
    parser.add_argument(
        "--nondeterministic", action="store_true", help="shuffle minibatches from fresh entropy"
    )
    parser.add_argument("--depth", type=int, choices=[1, 2])
    parser.add_argument("--factors", type=int)
    parser.add_argument("--mappings", type=int)
    parser.add_argument("--factors2", type=int)
    parser.add_argument("--mappings2", type=int)
    _add_split_args(parser, "train")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="relseq",
        description="Gated autoencoders for learning the dynamics of image sequences.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug output")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("gen", help="generate a synthetic sequence data set")
    p.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
    p.add_argument("--n", type=int, required=True, help="number of sequences")
    p.add_argument("--size", type=int, help="patch or image side length in pixels")
    p.add_argument("--length", "-T", type=int, help="frames per sequence")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--vel-range", type=float)
    p.add_argument("--angle-range", type=float, help="radians")
    p.add_argument("--acc-range", type=float)
    p.add_argument("--patches", help="container with a 'patches' array")
    p.add_argument("--n-balls", type=int)
    p.add_argument("--radius", type=float)
    p.add_argument("--box-size", type=float)
    p.add_argument("--speed", type=float)
    p.add_argument("--substeps", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("whiten", help="fit a PCA whitening transform")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fraction", type=_fraction, default=preprocess.DEFAULT_TARGET_FRACTION)
    p.add_argument("--eps", type=float, default=preprocess.DEFAULT_EPS)
    _add_split_args(p, "train")
    p.set_defaults(func=cmd_whiten)

    p = sub.add_parser("train", help="run one training phase")
    _add_train_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("rollout", help="predict frames from seed frames")
    p.add_argument("--ckpt", action="append", help="checkpoint, may be repeated")
    p.add_argument("--data")
    p.add_argument("--whitening")
    p.add_argument("--config")
    p.add_argument("--steps", type=int, default=7)
    p.add_argument("--n", type=int, help="number of sequences")
    p.add_argument("--out", help="container of seed and predicted frames")
    p.add_argument("--metrics", help="JSON file of per step errors")
    p.add_argument("--pgm-dir")
    p.add_argument("--pgm-count", type=int, default=1, help="sequences to write as images")
    _add_split_args(p, "test")
    p.set_defaults(func=cmd_rollout)

    p = sub.add_parser("eval", help="classify sequences from mapping descriptors")
    p.add_argument("--ckpt")
    p.add_argument("--data")
    p.add_argument("--whitening")
    p.add_argument("--config")
    p.add_argument("--descriptor", choices=DESCRIPTOR_KINDS + ["all"], default="all")
    p.add_argument("--shuffle-labels", action="store_true", help="chance level check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split", type=_split_sizes, default=DEFAULT_FRACTIONS)
    p.add_argument("--split-seed", type=int, default=0)
    p.add_argument("--lr", dest="learning_rate", type=float)
    p.add_argument("--momentum", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--l2", type=float)
    p.add_argument("--out", help="metrics JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "compare", help="predictive against reconstructive training of one layer models"
    )
    p.add_argument("--data")
    p.add_argument("--whitening")
    p.add_argument("--config")
    p.add_argument("--seeds", type=_seed_list, default=[0, 1, 2], help="e.g. 0,1,2")
    p.add_argument("--split", type=_split_sizes, default=DEFAULT_FRACTIONS)
    p.add_argument("--split-seed", type=int, default=0)
    p.add_argument("--warmup-epochs", type=int, default=50,
                   help="shared reconstructive epochs before the arms split")
    p.add_argument("--epochs", type=int, default=200, help="epochs of each arm")
    p.add_argument("--lr", type=float)
    p.add_argument("--momentum", type=float)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--nondeterministic", action="store_true")
    p.add_argument("--factors", type=int)
    p.add_argument("--mappings", type=int)
    p.add_argument("--min-gap", type=float, default=1.0,
                   help="required lead of the predictive arm in accuracy points")
    p.add_argument("--out", help="JSON report")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gradcheck", help="compare analytic and numeric gradients")
    p.add_argument("--paths", nargs="+", choices=sorted(SUITES))
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", choices=sorted(SUITES), help="sign-flip one path")
    p.add_argument("--out", help="JSON report")
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("export", help="write frames and filter pairs as PGM images")
    p.add_argument("--data")
    p.add_argument("--ckpt")
    p.add_argument("--whitening", help="maps filters back to pixel space")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n", type=int, default=4, help="sequences to export")
    p.add_argument("--filters", type=int, default=16, help="filter pairs to export")
    p.set_defaults(func=cmd_export)

    return parser


def setup_logging(args):
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger("relseq").setLevel(level)


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(args)
    try:
        return args.func(args)
    except RelSeqError as err:
        logger.debug("%s failed", args.command, exc_info=True)
        print(f"relseq {args.command}: error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"relseq {args.command}: error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
