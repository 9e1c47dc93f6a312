"""Deterministic CSV writing and run manifests."""

from dataclasses import dataclass, field
import hashlib
import json
import os

from . import __version__


def format_value(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    return format(float(v), ".17g")


def write_csv(path, header, rows):
    """Write rows with 17 significant digits, comma separated, LF endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
    return path


def read_csv(path):
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        rows = [[float(x) for x in line.rstrip("\n").split(",")] for line in fh if line.strip()]
    return header, rows


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None = None
    version: str = __version__
    duration_s: float = 0.0
    outputs: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def add_output(self, path):
        self.outputs[os.path.basename(path)] = sha256(path)

    def write(self, directory, name="manifest.txt"):
        """Plain-text manifest: ``key = value`` lines, outputs last."""
        path = os.path.join(directory, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"command = {self.command}\n")
            fh.write(f"version = {self.version}\n")
            fh.write(f"seed = {self.seed}\n")
            fh.write(f"duration_s = {self.duration_s:.3f}\n")
            for k in sorted(self.parameters):
                fh.write(f"param.{k} = {format_value(self.parameters[k])}\n")
            for k in sorted(self.notes):
                fh.write(f"note.{k} = {json.dumps(self.notes[k], sort_keys=True)}\n")
            for k in sorted(self.outputs):
                fh.write(f"sha256.{k} = {self.outputs[k]}\n")
        return path
