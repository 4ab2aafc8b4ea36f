"""Benchmark orchestration: config-driven runs, CSV results and traces.

A benchmark config is a JSON file::

    {
      "mode": "cons",                  # cons | regu
      "params": [10, 20],              # s values (cons) or weights (regu)
      "instances": [
        {"kind": "random",         "m": 64, "n": 256, "support": 10,
         "noise": 10.0, "seed": 1},
        {"kind": "random-corrupt", "m": 64, "n": 256, "support": 10,
         "noise": 10.0, "seed": 2, "fraction": 0.02, "factor": 100.0},
        {"kind": "file", "path": "data.txt", "name": "mydata"}
      ],
      "solvers": [
        {"name": "dec", "krand": 4, "kgreedy": 2},
        {"name": "pgm"}
      ],
      "init_seeds": [0, 1, 2, 3, 4],
      "theta": 1e-3, "epsilon": 1e-5, "window": 50, "max_iters": 1000,
      "timing": false,
      "workers": 1
    }

Cells (instance x solver x param x init-seed) are independent jobs run
through a thread pool; all files are written by the main thread in a fixed
order, so identical configs yield byte-identical outputs.  Timing columns
are written as 0 unless ``timing`` is set, for the same reason.
"""

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .baselines import apgm, cvx_l1_sweep, omp, pgm
from .data import FLOAT_FMT, corrupt, gen_random, load_instance
from .dec import DecConfig, init_solution, run_dec
from .errors import InvalidParameterError
from .problem import (Cardinality, CompositeProblem, HalfPenalty, L0Penalty,
                      L1Penalty, QuadraticObjective, composite_value)

TRACE_HEADER = "iter,objective,step_norm,working_set,elapsed_s"
RESULTS_HEADER = "instance,solver,mode,param,seed,final_objective,nnz,iters,wall_s"
SUMMARY_HEADER = "instance,solver,mode,param,mean_objective,median_objective"

SOLVER_NAMES = ("dec", "pgm", "apgm", "omp", "cvx-l1", "pgm-l1", "pgm-lhalf")


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return FLOAT_FMT % v


def write_trace(path, trace, timing=False):
    """Serialize a SolveTrace to the iter/objective/step CSV schema."""
    lines = [TRACE_HEADER]
    for r in trace.records:
        ws = ";".join(str(i) for i in r.working_set)
        el = r.elapsed if timing else 0.0
        lines.append(",".join([
            str(r.iteration), FLOAT_FMT % r.objective, FLOAT_FMT % r.step_norm,
            ws, FLOAT_FMT % el]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def make_term(mode, param):
    if mode == "cons":
        return Cardinality(int(param))
    if mode == "regu":
        return L0Penalty(float(param))
    raise InvalidParameterError(f"mode must be 'cons' or 'regu', got {mode!r}")


def run_solver(name, A, b, mode, param, seed, theta=1e-3, epsilon=1e-5,
               window=50, max_iters=1000, krand=4, kgreedy=2):
    """Run one named solver on factored data; returns (x, trace_or_None).

    ``param`` is the sparsity level in cons mode and the penalty weight in
    regu mode; the relaxation solvers pgm-l1 / pgm-lhalf use it as their own
    weight.  omp and cvx-l1 are support-based and require cons mode.
    """
    if name not in SOLVER_NAMES:
        raise InvalidParameterError(
            f"unknown solver {name!r}; valid names: {', '.join(SOLVER_NAMES)}")
    obj = QuadraticObjective(A=A, b=b)
    n = obj.n

    if name in ("omp", "cvx-l1"):
        if mode != "cons":
            raise InvalidParameterError(f"{name} requires cons mode (a sparsity level)")
        x = omp(A, b, int(param)) if name == "omp" else cvx_l1_sweep(A, b, int(param))
        return x, None

    if name == "pgm-l1":
        prob = CompositeProblem(obj, L1Penalty(float(param)))
    elif name == "pgm-lhalf":
        prob = CompositeProblem(obj, HalfPenalty(float(param)))
    else:
        prob = CompositeProblem(obj, make_term(mode, param))

    x0 = init_solution(n, prob.term, seed)
    if name == "dec":
        config = DecConfig(n_random=krand, n_greedy=kgreedy, theta=theta,
                           epsilon=epsilon, window=window, max_iters=max_iters,
                           seed=seed)
        return run_dec(prob, x0, config)
    runner = pgm if name in ("pgm", "pgm-l1", "pgm-lhalf") else apgm
    return runner(prob, x0, max_iters=max_iters, epsilon=epsilon, window=window)


def _instance_data(spec):
    """Materialize one config instance entry; returns (name, A, b)."""
    kind = spec.get("kind", "file")
    if kind == "file":
        path = spec["path"]
        name = spec.get("name") or os.path.splitext(os.path.basename(path))[0]
        A, b = load_instance(path)
        return name, A, b
    m, n = int(spec["m"]), int(spec["n"])
    support = int(spec["support"])
    noise = float(spec.get("noise", 10.0))
    seed = int(spec.get("seed", 0))
    A, b, _ = gen_random(m, n, support, noise_scale=noise, seed=seed)
    if kind == "random":
        name = f"random-m{m}-n{n}-k{support}-seed{seed}"
    elif kind == "random-corrupt":
        fraction = float(spec.get("fraction", 0.02))
        factor = float(spec.get("factor", 100.0))
        A = corrupt(A, fraction=fraction, factor=factor, seed=seed + 1)
        name = f"corrupt-m{m}-n{n}-k{support}-seed{seed}"
    else:
        raise InvalidParameterError(f"unknown instance kind {kind!r}")
    return name, A, b


def _solver_label(spec):
    name = spec["name"]
    if name == "dec":
        return spec.get("label", f"dec-R{spec.get('krand', 4)}G{spec.get('kgreedy', 2)}")
    return spec.get("label", name)


def benchmark(config, out_dir):
    """Run every cell of a benchmark config; returns the results rows.

    Writes ``results.csv``, ``summary.csv``, and one trace CSV per
    trace-producing run under ``out_dir``/traces/.
    """
    if isinstance(config, str):
        with open(config) as fh:
            config = json.load(fh)
    mode = config.get("mode", "cons")
    params = config.get("params")
    if not params:
        raise InvalidParameterError("config needs a nonempty 'params' list")
    solvers = config.get("solvers")
    if not solvers:
        raise InvalidParameterError("config needs a nonempty 'solvers' list")
    for spec in solvers:
        if spec.get("name") not in SOLVER_NAMES:
            raise InvalidParameterError(
                f"unknown solver {spec.get('name')!r}; valid names: {', '.join(SOLVER_NAMES)}")
    seeds = config.get("init_seeds", [0])
    theta = float(config.get("theta", 1e-3))
    epsilon = float(config.get("epsilon", 1e-5))
    window = int(config.get("window", 50))
    max_iters = int(config.get("max_iters", 1000))
    timing = bool(config.get("timing", False))
    workers = int(config.get("workers", 1))

    instances = [_instance_data(spec) for spec in config.get("instances", [])]
    if not instances:
        raise InvalidParameterError("config needs a nonempty 'instances' list")

    cells = []
    for iname, A, b in instances:
        for sspec in solvers:
            for param in params:
                for seed in seeds:
                    cells.append((iname, A, b, sspec, param, seed))

    def run_cell(cell):
        iname, A, b, sspec, param, seed = cell
        tic = time.perf_counter()
        x, trace = run_solver(
            sspec["name"], A, b, mode, param, seed, theta=theta,
            epsilon=epsilon, window=window, max_iters=max_iters,
            krand=int(sspec.get("krand", 4)), kgreedy=int(sspec.get("kgreedy", 2)))
        wall = time.perf_counter() - tic
        obj = QuadraticObjective(A=A, b=b)
        if sspec["name"] in ("pgm-l1", "pgm-lhalf"):
            term = L1Penalty(float(param)) if sspec["name"] == "pgm-l1" else HalfPenalty(float(param))
        else:
            term = make_term(mode, param)
        final = composite_value(CompositeProblem(obj, term), x)
        return x, trace, float(final), wall

    os.makedirs(out_dir, exist_ok=True)
    trace_dir = os.path.join(out_dir, "traces")
    os.makedirs(trace_dir, exist_ok=True)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(pool.map(run_cell, cells))

    rows = []
    groups = {}
    order = []
    for cell, (x, trace, final, wall) in zip(cells, outcomes):
        iname, _, _, sspec, param, seed = cell
        label = _solver_label(sspec)
        iters = len(trace) if trace is not None else 0
        rows.append(",".join([
            iname, label, mode, _fmt(param), str(seed), FLOAT_FMT % final,
            str(int(np.count_nonzero(x))), str(iters),
            FLOAT_FMT % (wall if timing else 0.0)]))
        key = (iname, label, param)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(final)
        if trace is not None:
            tname = f"{iname}_{label}_{_fmt(param)}_{seed}.csv"
            write_trace(os.path.join(trace_dir, tname), trace, timing=timing)

    with open(os.path.join(out_dir, "results.csv"), "w") as fh:
        fh.write(RESULTS_HEADER + "\n")
        fh.write("\n".join(rows) + "\n")

    with open(os.path.join(out_dir, "summary.csv"), "w") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for key in order:
            iname, label, param = key
            vals = np.asarray(groups[key])
            fh.write(",".join([
                iname, label, mode, _fmt(param),
                FLOAT_FMT % float(np.mean(vals)),
                FLOAT_FMT % float(np.median(vals))]) + "\n")
    return rows
