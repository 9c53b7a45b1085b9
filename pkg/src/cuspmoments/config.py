"""Flat key=value experiment configuration.

One ``key = value`` per line, ``#`` starts a comment.  Values are integers,
floats (written with 17 significant digits), booleans (true/false), strings,
or comma-separated lists of those.  ``command`` names the subcommand, e.g.
``command = resonance scan``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ._numerics import fmt_float
from .errors import DomainError

FORMATS = ("csv", "json")


def _parse_scalar(text: str):
    t = text.strip()
    low = t.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(t)
    except ValueError:
        pass
    try:
        return float(t)
    except ValueError:
        return t


def parse_value(text: str):
    if "," in text:
        return [_parse_scalar(p) for p in text.split(",") if p.strip()]
    return _parse_scalar(text)


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, (list, tuple)):
        # a trailing comma keeps one-element lists distinct from scalars
        body = ",".join(format_value(v) for v in value)
        return body + "," if len(value) < 2 else body
    text = str(value)
    if "\n" in text or "," in text or "#" in text:
        raise DomainError(f"string value {text!r} cannot be stored in a flat config")
    return text


@dataclass
class ExperimentConfig:
    command: str
    params: dict = field(default_factory=dict)
    format: str = "csv"
    threads: int = 1

    def __post_init__(self):
        if self.format not in FORMATS:
            raise DomainError(f"format must be one of {FORMATS}")
        if int(self.threads) != self.threads or self.threads < 1:
            raise DomainError("threads must be a positive integer")

    def dumps(self) -> str:
        lines = [f"command = {self.command}", f"format = {self.format}", f"threads = {self.threads}"]
        for key in sorted(self.params):
            lines.append(f"{key} = {format_value(self.params[key])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        raw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"config line {lineno}: expected key = value")
            key, val = line.split("=", 1)
            key = key.strip().replace("-", "_")
            if not key:
                raise DomainError(f"config line {lineno}: empty key")
            raw[key] = val.strip()
        command = raw.pop("command", "")
        fmt = raw.pop("format", "csv")
        threads = _parse_scalar(raw.pop("threads", "1"))
        return cls(command, {k: parse_value(v) for k, v in raw.items()}, fmt, threads)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.loads(fh.read())
