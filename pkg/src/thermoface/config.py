"""Run configuration shared by the pipeline, the evaluator, and the CLI.

Settings come from defaults, then an optional flat key=value file, then
command-line flags, later sources winning.
"""

from dataclasses import dataclass, replace
from pathlib import Path

from .features import canonical_level, level_depth

_CLASSIFIERS = ("nearest", "mean_reference")


@dataclass
class Config:
    """Knobs for one pipeline run.

    crop_size None keeps each crop at its native padded geometry;
    otherwise every crop is resampled to crop_size x crop_size before
    decomposition so all series share a length.
    """

    connectivity: int = 8
    crop_size: int = 128
    level: str = "LL2"
    classifier: str = "nearest"
    quantize: bool = True
    debug_dir: str = None

    def __post_init__(self):
        if self.connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}")
        self.level = canonical_level(self.level)
        if self.classifier not in _CLASSIFIERS:
            raise ValueError(
                f"classifier must be one of {_CLASSIFIERS}, got {self.classifier!r}")
        if self.crop_size is not None:
            if self.crop_size < 4 or self.crop_size % 4:
                raise ValueError(
                    f"crop_size must be a positive multiple of 4, got {self.crop_size}")

    @property
    def wavelet_level(self) -> int:
        """Reduction passes implied by the level tag: 0, 1 or 2."""
        return level_depth(self.level)


def _parse_value(key: str, raw: str):
    val = raw.strip()
    if key == "connectivity":
        return int(val)
    if key == "crop_size":
        return None if val.lower() in ("none", "native") else int(val)
    if key == "quantize":
        low = val.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"quantize must be a boolean, got {val!r}")
    if key in ("level", "classifier", "debug_dir"):
        return val
    raise ValueError(f"unknown config key {key!r}")


def load_config_file(path) -> dict:
    """Read flat key=value lines; blank lines and # comments are skipped."""
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {text!r}")
        key, _, raw = text.partition("=")
        overrides[key.strip()] = _parse_value(key.strip(), raw)
    return overrides


def make_config(config_file=None, **flag_overrides) -> Config:
    """Defaults, then the config file, then flags with non-None values.

    A crop_size flag of "native" turns resampling off (None can't mark
    that through the flag layer, it means "flag absent" there).
    """
    cfg = Config()
    if config_file is not None:
        cfg = replace(cfg, **load_config_file(config_file))
    flags = {k: v for k, v in flag_overrides.items() if v is not None}
    if str(flags.get("crop_size")).lower() == "native":
        flags["crop_size"] = None
    elif "crop_size" in flags:
        flags["crop_size"] = int(flags["crop_size"])
    if flags:
        cfg = replace(cfg, **flags)
    return cfg
