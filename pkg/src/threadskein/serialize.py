"""JSON and CSV encodings.

Every rational is written as ``"p/q"``.  Output is byte-deterministic:
keys are sorted and the layout is fixed.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Sequence

from .attachment import ThreadingSpace
from .exactnum import OpenInterval, Q, fmt
from .gammastar import GammaStarRun, JumpCertificate, SigmaRecord, StepRecord
from .lipmap import PLMap
from .skein import InnerPoint, SkeinConfig, SkeinTruncation, ThreadRecord, address, parse_address
from .thread import Thread


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _interval(g: OpenInterval) -> list[str]:
    return [fmt(g.left), fmt(g.right)]


def _parse_interval(pair) -> OpenInterval:
    return OpenInterval(Q(pair[0]), Q(pair[1]))


# -- threads and maps ------------------------------------------------------------


def thread_to_json(t: Thread) -> dict:
    return {"length": fmt(t.length), "width": fmt(t.width), "gaps": [_interval(g) for g in t.gaps]}


def thread_from_json(data: dict) -> Thread:
    return Thread(Q(data["length"]), Q(data["width"]), tuple(_parse_interval(g) for g in data["gaps"]))


def plmap_to_json(F: PLMap) -> dict:
    return {
        "domain": thread_to_json(F.domain),
        "codomain": thread_to_json(F.codomain),
        "points": [[fmt(x), fmt(v)] for x, v in F.points],
    }


def plmap_from_json(data: dict) -> PLMap:
    return PLMap(
        thread_from_json(data["domain"]),
        thread_from_json(data["codomain"]),
        tuple((Q(x), Q(v)) for x, v in data["points"]),
    )


def threading_to_json(ts: ThreadingSpace) -> dict:
    return {
        "width": fmt(ts.width),
        "threads": [{"gamma_id": gid, "thread": thread_to_json(t)} for gid, t in ts.threads],
    }


def threading_from_json(data: dict) -> ThreadingSpace:
    return ThreadingSpace(Q(data["width"]), tuple((t["gamma_id"], thread_from_json(t["thread"])) for t in data["threads"]))


# -- gamma* ---------------------------------------------------------------------------


def run_to_json(run: GammaStarRun) -> dict:
    return {
        "widths": [fmt(w) for w in run.widths],
        "K": fmt(run.K),
        "eps": fmt(run.eps),
        "k_max": run.k_max,
        "produced": [fmt(g) for g in run.produced],
        "trace": [
            {
                "step": r.step,
                "thread_index": r.thread_index,
                "depth": r.depth,
                "alphas": [fmt(a) for a in r.alphas],
                "gaps": [_interval(g) for g in r.gaps],
                "n_omega": r.n_omega,
                "gamma": fmt(r.gamma),
                "sigmas": [
                    {
                        "ordering": list(s.ordering),
                        "sweepings": [_interval(d) for d in s.sweepings],
                        "selected": list(s.selected),
                    }
                    for s in r.sigmas
                ],
            }
            for r in run.trace
        ],
    }


def run_from_json(data: dict) -> GammaStarRun:
    trace = tuple(
        StepRecord(
            step=r["step"],
            thread_index=r["thread_index"],
            depth=r["depth"],
            alphas=tuple(Q(a) for a in r["alphas"]),
            gaps=tuple(_parse_interval(g) for g in r["gaps"]),
            sigmas=tuple(
                SigmaRecord(
                    tuple(s["ordering"]),
                    tuple(_parse_interval(d) for d in s["sweepings"]),
                    tuple(s["selected"]),
                )
                for s in r["sigmas"]
            ),
            n_omega=r["n_omega"],
            gamma=Q(r["gamma"]),
        )
        for r in data["trace"]
    )
    return GammaStarRun(
        tuple(Q(w) for w in data["widths"]),
        Q(data["K"]),
        Q(data["eps"]),
        data["k_max"],
        tuple(Q(g) for g in data["produced"]),
        trace,
    )


def certificate_to_json(cert: JumpCertificate) -> dict:
    return {
        "target": thread_to_json(cert.target),
        "budgets": [fmt(b) for b in cert.budgets],
        "K": fmt(cert.K),
        "m": cert.m,
        "outcome": cert.outcome,
        "assignment": [{"block": [_interval(g) for g in block], "slot": slot} for block, slot in cert.assignment],
        "partitions_checked": cert.partitions_checked,
    }


def certificate_from_json(data: dict) -> JumpCertificate:
    return JumpCertificate(
        thread_from_json(data["target"]),
        tuple(Q(b) for b in data["budgets"]),
        Q(data["K"]),
        data["m"],
        data["outcome"],
        tuple((tuple(_parse_interval(g) for g in a["block"]), a["slot"]) for a in data["assignment"]),
        data["partitions_checked"],
    )


# -- skeins ---------------------------------------------------------------------------------


def config_to_json(c: SkeinConfig) -> dict:
    return {
        "depth": c.depth,
        "gammas": c.gammas,
        "grid": fmt(c.grid),
        "gaps_per_thread": c.gaps_per_thread,
        "pair_limit": c.pair_limit,
        "pair_guard": c.pair_guard,
    }


def config_from_json(data: dict) -> SkeinConfig:
    return SkeinConfig(
        depth=data["depth"],
        gammas=data["gammas"],
        grid=Q(data["grid"]),
        gaps_per_thread=data["gaps_per_thread"],
        pair_limit=data["pair_limit"],
        pair_guard=data["pair_guard"],
    )


def skein_to_json(tr: SkeinTruncation) -> dict:
    return {
        "config": config_to_json(tr.config),
        "generations": [[address(p) for p in g] for g in tr.generations],
        "threads": [
            {
                "parents": [address(p) for p in rec.parents],
                "gamma_id": rec.gamma_id,
                "thread": thread_to_json(rec.thread),
                "coords": [fmt(p.coord) for p in rec.points],
            }
            for rec in tr.threads
        ],
    }


def skein_from_json(data: dict) -> SkeinTruncation:
    threads = []
    for rec in data["threads"]:
        parents = tuple(parse_address(a) for a in rec["parents"])
        pts = tuple(InnerPoint(parents, rec["gamma_id"], Q(c)) for c in rec["coords"])
        threads.append(ThreadRecord(parents, rec["gamma_id"], thread_from_json(rec["thread"]), pts))
    generations = tuple(tuple(parse_address(a) for a in g) for g in data["generations"])
    return SkeinTruncation(config_from_json(data["config"]), generations, tuple(threads))


# -- CSV ------------------------------------------------------------------------------


def distance_matrix_csv(points: Sequence[Fraction], distance) -> str:
    """Header row of coordinates, then one row per point; entries as ``p/q``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + [fmt(p) for p in points])
    for p in points:
        writer.writerow([fmt(p)] + [fmt(distance(p, q)) for q in points])
    return buf.getvalue()


def thread_matrix_csv(t: Thread, points: Sequence | None = None) -> str:
    pts = [t.point(p) for p in (points if points is not None else t.sample_points(Fraction(1, 8)))]
    return distance_matrix_csv(pts, t._d)


ENCODERS = {
    Thread: thread_to_json,
    PLMap: plmap_to_json,
    ThreadingSpace: threading_to_json,
    GammaStarRun: run_to_json,
    JumpCertificate: certificate_to_json,
    SkeinTruncation: skein_to_json,
}


def to_json(obj) -> dict:
    try:
        return ENCODERS[type(obj)](obj)
    except KeyError:
        raise TypeError(f"no JSON encoding for {type(obj).__name__}") from None
