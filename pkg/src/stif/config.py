"""Run configuration: every pipeline default in one flat key-value file."""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .decoder import DecoderConfig, DecodingWeights
from .textnorm import ALL_MASK_KINDS, NormalizationConfig

_COMMENTS = {
    "seed": "root seed; every other seed derives from it",
    "min_tokens": "filter: minimum tokens per tweet",
    "max_tokens": "filter: maximum tokens per tweet",
    "english_ratio": "filter: drop tweets with at least this fraction of English tokens",
    "split_train": "seeded split sizes (ignored when official split files are present)",
    "mask_kinds": "comma-separated subset of num,account,date,percent",
    "apply_to": "informal | both",
    "target_lowercase": "lowercase the formal side for training and evaluation",
    "target_mask": "mask entities on the formal side for training and evaluation",
    "symmetrization": "intersection | union | grow-diag | grow-diag-final | grow-diag-final-and",
    "lm_extra_text": "optional file of extra formal sentences for the LM",
    "distortion_limit": "negative for unlimited",
    "tune_trials": "random-search trials on dev; 0 keeps the default weights",
    "tune_beam": "beam size used while tuning",
    "iterations": "number of reports from iterate; iteration 0 is the supervised baseline",
    "sample_size": "synthetic sentences per iteration",
    "workers": "decoding processes; 0 uses every CPU",
}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    # corpus
    min_tokens: int = 5
    max_tokens: int = 25
    english_ratio: float = 0.6
    split_train: int = 1922
    split_dev: int = 214
    split_test: int = 364
    # textnorm
    lowercase: bool = True
    squeeze_repeats: bool = True
    mask_kinds: str = "num,account,date,percent"
    apply_to: str = "informal"
    target_lowercase: bool = True
    target_mask: bool = True
    # alignment / phrases
    em_iterations: int = 5
    symmetrization: str = "grow-diag-final-and"
    max_phrase_len: int = 7
    table_limit: int = 20
    # language model
    lm_order: int = 3
    lm_include_synthetic: bool = False
    lm_extra_text: str = ""
    # decoder
    beam_size: int = 100
    distortion_limit: int = 6
    max_sentence_len: int = 100
    w_phrase_0: float = 0.2
    w_phrase_1: float = 0.2
    w_phrase_2: float = 0.2
    w_phrase_3: float = 0.2
    w_lm: float = 0.5
    w_distortion: float = 0.3
    w_word_penalty: float = -1.0
    tune_trials: int = 0
    tune_beam: int = 20
    # forward translation
    iterations: int = 11
    sample_size: int = 2500
    fixed_sample: bool = False
    workers: int = 0

    def __post_init__(self):
        # validates as a side effect
        self.normalization()
        self.decoder_config()

    # -- derived configs ---------------------------------------------------

    @property
    def split_sizes(self) -> tuple[int, int, int]:
        return (self.split_train, self.split_dev, self.split_test)

    def normalization(self) -> NormalizationConfig:
        kinds = frozenset(k.strip() for k in self.mask_kinds.split(",") if k.strip())
        return NormalizationConfig(self.lowercase, self.squeeze_repeats, kinds, self.apply_to)

    def target_normalization(self) -> NormalizationConfig:
        """Formal-side preprocessing used for training data and BLEU references."""
        base = self.normalization().for_side("formal")
        if base.apply_to == "both":
            return base
        kinds = self.normalization().mask_kinds if self.target_mask else frozenset()
        return NormalizationConfig(self.target_lowercase, False, kinds & ALL_MASK_KINDS, self.apply_to)

    def decoder_config(self, beam: int | None = None) -> DecoderConfig:
        return DecoderConfig(beam or self.beam_size, self.distortion_limit, self.max_phrase_len,
                             self.max_sentence_len)

    def weights(self) -> DecodingWeights:
        return DecodingWeights((self.w_phrase_0, self.w_phrase_1, self.w_phrase_2, self.w_phrase_3),
                               self.w_lm, self.w_distortion, self.w_word_penalty)

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()[:16]

    # -- file format -------------------------------------------------------

    def dumps(self) -> str:
        lines = ["# stif run configuration (key = value; '#' starts a comment)"]
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in _COMMENTS:
                lines.append(f"# {_COMMENTS[f.name]}")
            if isinstance(v, bool):
                v = "true" if v else "false"
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, source: str = "<config>") -> "RunConfig":
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{source}:{lineno}: expected 'key = value'")
            key, value = (x.strip() for x in line.split("=", 1))
            if key not in types:
                raise ValueError(f"{source}:{lineno}: unknown config key {key!r}")
            values[key] = _parse(value, types[key], f"{source}:{lineno}")
        return cls(**values)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.loads(Path(path).read_text(encoding="utf-8"), str(path))

    def as_dict(self) -> dict:
        return asdict(self)


def _parse(value: str, typ, where: str):
    typ = typ if isinstance(typ, str) else typ.__name__
    try:
        if typ == "bool":
            low = value.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError
            return low in ("true", "1", "yes")
        if typ == "int":
            return int(value)
        if typ == "float":
            return float(value)
    except ValueError:
        raise ValueError(f"{where}: cannot parse {value!r} as {typ}") from None
    return value
