"""Built-in fixtures: the covers and representations the test and verify
suites run over, shipped as versioned data so everything works offline and
deterministically."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .covers import (
    GaloisCover,
    build_artin_schreier,
    build_compositum_tower,
    build_kummer,
    trivial_cover,
)
from .errors import InputSchemaError
from .fields import FiniteField, field_create
from .linalg import MatrixFF
from .ramification import Representation
from .series import LaurentSeries

CORPUS_PRECISION = 24


@lru_cache(maxsize=1)
def _raw() -> dict:
    path = resources.files("ramify").joinpath("data/corpus.json")
    with path.open("r", encoding="utf-8") as fh:
        return json.load(fh)


def corpus_version() -> int:
    return _raw()["corpus_version"]


def cover_ids() -> list[str]:
    return [c["id"] for c in _raw()["covers"]]


def rep_ids(kinds: tuple[str, ...] | None = None) -> list[str]:
    out = []
    for entry in _raw()["representations"]:
        if kinds is not None:
            spec = _cover_spec(entry["cover"])["cover"]
            if spec["type"] not in kinds:
                continue
        out.append(entry["id"])
    return out


def _cover_spec(cover_id: str) -> dict:
    for c in _raw()["covers"]:
        if c["id"] == cover_id:
            return c
    raise KeyError(cover_id)


def build_cover(base_cfg: dict, cover_cfg: dict, prec: int | None = None) -> GaloisCover:
    """Construct a cover from its serialized description (also the CLI path)."""
    base = field_create(int(base_cfg["p"]), int(base_cfg["a"]))
    kind = cover_cfg.get("type")
    if kind == "artin_schreier":
        f = LaurentSeries.from_sparse(base, cover_cfg["f"])
        return build_artin_schreier(base, f, prec=prec)
    if kind == "kummer":
        return build_kummer(base, int(cover_cfg["m"]), prec=prec)
    if kind == "tower":
        m = int(cover_cfg["m"])
        lower = build_kummer(base, m, prec=prec) if m >= 2 else trivial_cover(base)
        f = LaurentSeries.from_sparse(base, cover_cfg["f"])
        return build_compositum_tower(lower, f, prec=prec)
    raise InputSchemaError(f"unknown cover type {kind!r}")


def representation_from_spec(cover: GaloisCover, rep_cfg: dict) -> Representation:
    field = field_create(int(rep_cfg["ell"]), int(rep_cfg.get("n", 1)))
    gen_images = {}
    for label, rows in rep_cfg["images"].items():
        gen_images[label] = MatrixFF.from_int_rows(field, rows)
    return Representation.from_generator_images(cover.group, gen_images)


@lru_cache(maxsize=None)
def get_cover(cover_id: str) -> GaloisCover:
    spec = _cover_spec(cover_id)
    return build_cover(spec["base"], spec["cover"], prec=CORPUS_PRECISION)


@lru_cache(maxsize=None)
def get_representation(rep_id: str):
    """Returns (cover, representation, N) for a corpus representation."""
    for entry in _raw()["representations"]:
        if entry["id"] == rep_id:
            cover = get_cover(entry["cover"])
            rep = representation_from_spec(cover, entry)
            return cover, rep, int(entry["N"])
    raise KeyError(rep_id)


def cover_base(cover_id: str) -> FiniteField:
    spec = _cover_spec(cover_id)
    return field_create(spec["base"]["p"], spec["base"]["a"])
