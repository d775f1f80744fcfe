import hashlib
import json
import os

import numpy as np

from .instances import (
    Instance,
    MaxCutInstance,
    NumberPartitionInstance,
    PortfolioInstance,
)

INSTANCE_TYPES = ("maxcut", "numpart", "portfolio")


def instance_type(instance: Instance) -> str:
    if isinstance(instance, MaxCutInstance):
        return "maxcut"
    if isinstance(instance, NumberPartitionInstance):
        return "numpart"
    if isinstance(instance, PortfolioInstance):
        return "portfolio"
    raise TypeError(f"unknown instance type {type(instance).__name__}")


def instance_to_dict(instance: Instance) -> dict:
    """
    {"type": ..., "n": ..., <payload>, "seed": ...}

    Floats go through json's shortest round-trip repr, so parsing the
    document back reproduces every real bit for bit.
    """
    kind = instance_type(instance)
    document: dict = {"type": kind, "n": instance.n}

    if isinstance(instance, MaxCutInstance):
        document["family"] = instance.family
        document["edges"] = [[i, j, w] for i, j, w in instance.edges]
    elif isinstance(instance, NumberPartitionInstance):
        document["numbers"] = list(instance.numbers)
        document["bound"] = instance.bound
    else:
        document["returns"] = [float(v) for v in instance.returns]
        document["covariance"] = [[float(v) for v in row] for row in instance.covariance]
        document["risk"] = instance.risk
        document["budget"] = instance.budget
        document["penalty_weight"] = instance.penalty_weight

    document["seed"] = instance.seed
    return document


def instance_from_dict(document: dict) -> Instance:
    kind = document.get("type")

    if kind == "maxcut":
        return MaxCutInstance(
            n_vertices=int(document["n"]),
            edges=tuple(tuple(edge) for edge in document["edges"]),
            seed=document.get("seed"),
            family=document.get("family", "custom"),
        )
    if kind == "numpart":
        return NumberPartitionInstance(
            numbers=tuple(document["numbers"]),
            seed=document.get("seed"),
            bound=document.get("bound"),
        )
    if kind == "portfolio":
        return PortfolioInstance(
            returns=np.array(document["returns"], dtype=np.float64),
            covariance=np.array(document["covariance"], dtype=np.float64),
            risk=document["risk"],
            budget=document["budget"],
            penalty_weight=document.get("penalty_weight") or 0.0,
            seed=document.get("seed"),
        )

    raise ValueError(f"unknown instance type {kind!r}, expected one of {INSTANCE_TYPES}")


def instance_to_json(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2)


def instance_from_json(text: str) -> Instance:
    return instance_from_dict(json.loads(text))


def instance_hash(instance: Instance) -> str:
    canonical = json.dumps(instance_to_dict(instance), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def save_instance(instance: Instance, file_path: str):
    os.makedirs(os.path.dirname(file_path) or ".", exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(instance_to_json(instance))


def load_instance(file_path: str) -> Instance:
    with open(file_path, "r", encoding="utf-8") as f:
        return instance_from_json(f.read())
