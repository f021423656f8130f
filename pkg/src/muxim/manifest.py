"""Multiplex file formats: manifest + per-layer edge files.

Manifest (line oriented, '#' comments, paths relative to the manifest):

    version = 1
    [layer]
    path = layer0.edges
    model = ic                  # ic | lt | mlt | fixed_threshold
    undirected = false          # each line also adds the reverse edge
    weight_default = 1.0        # used when an edge line omits the weight
    nodes = 100                 # optional: declare ids 0..99 present
    isolated = 7 42             # optional: declare specific ids present
    threshold_default = 1.0     # fixed_threshold layers
    thresholds = layer0.theta   # optional "node theta" lines

Edge files are whitespace-separated "src dst [weight]" lines with the same
comment rules; user ids are non-negative integers shared across all files.
See docs/formats.md for the full grammar.
"""

from __future__ import annotations

import os
from typing import Iterator

from .errors import ManifestError
from .model import (
    FIXED_THRESHOLD,
    MODEL_KINDS,
    DiffusionModelSpec,
    Layer,
    Multiplex,
    build_multiplex,
    make_layer,
)

FORMAT_VERSION = 1

_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def _content_lines(path: str) -> Iterator[tuple[int, str]]:
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"{path}: cannot open ({exc})") from None
    with handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def _parse_edges(
    path: str, weight_default: float, undirected: bool
) -> list[tuple[int, int, float]]:
    edges: list[tuple[int, int, float]] = []
    for lineno, line in _content_lines(path):
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ManifestError(
                f"{path}:{lineno}: expected 'src dst [weight]', got {line!r}"
            )
        try:
            u = int(parts[0])
            v = int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else weight_default
        except ValueError:
            raise ManifestError(
                f"{path}:{lineno}: non-numeric field in {line!r}"
            ) from None
        edges.append((u, v, w))
        if undirected:
            edges.append((v, u, w))
    return edges


def _parse_thresholds(path: str) -> dict[int, float]:
    thresholds: dict[int, float] = {}
    for lineno, line in _content_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise ManifestError(
                f"{path}:{lineno}: expected 'node theta', got {line!r}"
            )
        try:
            thresholds[int(parts[0])] = float(parts[1])
        except ValueError:
            raise ManifestError(
                f"{path}:{lineno}: non-numeric field in {line!r}"
            ) from None
    return thresholds


def _parse_stanzas(path: str) -> tuple[dict, list[dict]]:
    header: dict[str, str] = {}
    stanzas: list[dict] = []
    current = header
    for lineno, line in _content_lines(path):
        if line == "[layer]":
            current = {}
            stanzas.append(current)
            continue
        if "=" not in line:
            raise ManifestError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        current[key.strip()] = value.strip()
    return header, stanzas


def load_multiplex(manifest_path: str) -> Multiplex:
    """Build a multiplex from a manifest file (see module docstring)."""
    header, stanzas = _parse_stanzas(manifest_path)
    version = int(header.get("version", "1"))
    if version != FORMAT_VERSION:
        raise ManifestError(
            f"{manifest_path}: unsupported format version {version}"
        )
    if not stanzas:
        raise ManifestError(f"{manifest_path}: no [layer] stanzas")
    base = os.path.dirname(os.path.abspath(manifest_path))
    layers: list[Layer] = []
    for index, stanza in enumerate(stanzas):
        if "path" not in stanza:
            raise ManifestError(
                f"{manifest_path}: layer {index} is missing 'path'"
            )
        kind = stanza.get("model", "ic").lower()
        if kind not in MODEL_KINDS:
            raise ManifestError(
                f"{manifest_path}: layer {index} has unknown model {kind!r}"
            )
        undirected = _BOOL.get(stanza.get("undirected", "false").lower())
        if undirected is None:
            raise ManifestError(
                f"{manifest_path}: layer {index} has bad undirected flag"
            )
        weight_default = float(stanza.get("weight_default", "1.0"))
        edge_path = os.path.join(base, stanza["path"])
        edges = _parse_edges(edge_path, weight_default, undirected)
        thresholds: dict[int, float] = {}
        if "thresholds" in stanza:
            thresholds = _parse_thresholds(os.path.join(base, stanza["thresholds"]))
        default_threshold = (
            float(stanza["threshold_default"])
            if "threshold_default" in stanza
            else None
        )
        spec = DiffusionModelSpec(
            kind=kind, thresholds=thresholds, default_threshold=default_threshold
        )
        extra: list[int] = []
        if "nodes" in stanza:
            extra = list(range(int(stanza["nodes"])))
        if "isolated" in stanza:
            extra.extend(int(tok) for tok in stanza["isolated"].split())
        layers.append(make_layer(index, edges, spec, extra_nodes=extra))
    return build_multiplex(layers)


def save_multiplex(m: Multiplex, out_dir: str, name: str = "multiplex") -> str:
    """Write a multiplex as manifest + edge files; returns the manifest path.

    Weights are written with repr so a reload reproduces them exactly.
    """
    os.makedirs(out_dir, exist_ok=True)
    lines = [f"version = {FORMAT_VERSION}"]
    for layer in m.layers:
        edge_name = f"{name}_layer{layer.index}.edges"
        with open(os.path.join(out_dir, edge_name), "w", encoding="utf-8") as fh:
            for u, v, w in layer.edges():
                fh.write(f"{u} {v} {w!r}\n")
        lines.append("[layer]")
        lines.append(f"path = {edge_name}")
        lines.append(f"model = {layer.model.kind}")
        isolated = sorted(layer.nodes - layer.non_isolated)
        if isolated:
            lines.append("isolated = " + " ".join(str(v) for v in isolated))
        spec = layer.model
        if spec.kind == FIXED_THRESHOLD:
            if spec.default_threshold is not None:
                lines.append(f"threshold_default = {spec.default_threshold!r}")
            if spec.thresholds:
                theta_name = f"{name}_layer{layer.index}.theta"
                with open(
                    os.path.join(out_dir, theta_name), "w", encoding="utf-8"
                ) as fh:
                    for node in sorted(spec.thresholds):
                        fh.write(f"{node} {spec.thresholds[node]!r}\n")
                lines.append(f"thresholds = {theta_name}")
    manifest_path = os.path.join(out_dir, f"{name}.manifest")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return manifest_path
