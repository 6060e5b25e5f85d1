"""Input sample streams: synthesis, file I/O and growth-rate analysis."""

from __future__ import annotations

import csv
import enum
import math
import wave
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import ndtri

from .errors import ConfigError, DomainError, FormatError, ParseError, UnsupportedError

__all__ = [
    "DistributionKind",
    "Sinusoid",
    "SinusoidMixture",
    "RandomProcess",
    "SignalSpec",
    "SampleStream",
    "draw",
    "lower_quantile",
    "generate",
    "lipschitz_bound",
    "max_sampling_period",
    "max_increment",
    "read_csv",
    "write_csv",
    "read_pcm_audio",
    "write_pcm_audio",
]

CSV_HEADER = ("index", "volts")
PCM_FULL_SCALE = 32768


class DistributionKind(str, enum.Enum):
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"
    LAPLACIAN = "laplacian"


@dataclass(frozen=True)
class Sinusoid:
    amplitude: float
    frequency: float
    phase: float = 0.0


@dataclass(frozen=True)
class SinusoidMixture:
    components: tuple[Sinusoid, ...] = ()

    @classmethod
    def of(cls, *terms):
        """Build from ``(amplitude, frequency[, phase])`` tuples."""
        return cls(tuple(Sinusoid(*t) for t in terms))


@dataclass(frozen=True)
class RandomProcess:
    distribution: DistributionKind
    sigma: float


@dataclass(frozen=True)
class SignalSpec:
    kind: Union[SinusoidMixture, RandomProcess]
    duration: float
    sample_rate: float

    def validate(self):
        if not (self.sample_rate > 0 and math.isfinite(self.sample_rate)):
            raise ConfigError(f"sample_rate must be positive, got {self.sample_rate}")
        if not (self.duration > 0 and math.isfinite(self.duration)):
            raise ConfigError(f"duration must be positive, got {self.duration}")
        if isinstance(self.kind, SinusoidMixture):
            for c in self.kind.components:
                if not (c.amplitude >= 0 and c.frequency >= 0):
                    raise ConfigError(f"amplitude and frequency must be >= 0: {c}")
                if not all(map(math.isfinite, (c.amplitude, c.frequency, c.phase))):
                    raise ConfigError(f"non-finite sinusoid parameter: {c}")
        elif isinstance(self.kind, RandomProcess):
            if not (self.kind.sigma > 0 and math.isfinite(self.kind.sigma)):
                raise ConfigError(f"sigma must be positive, got {self.kind.sigma}")
            DistributionKind(self.kind.distribution)
        else:
            raise ConfigError(f"unknown signal kind {self.kind!r}")

    @property
    def num_samples(self):
        return int(round(self.duration * self.sample_rate))


@dataclass(frozen=True, eq=False)
class SampleStream:
    """Real-valued samples in volts taken every ``1 / sample_rate`` seconds."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=np.float64)
        if x.ndim != 1 or x.size == 0:
            raise ConfigError("a sample stream must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(x)):
            raise ConfigError("sample stream contains non-finite values")
        if not (self.sample_rate > 0 and math.isfinite(self.sample_rate)):
            raise ConfigError(f"sample_rate must be positive, got {self.sample_rate}")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    @property
    def period(self):
        return 1.0 / self.sample_rate

    def __eq__(self, other):
        if not isinstance(other, SampleStream):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(
            self.samples, other.samples
        )


def draw(distribution, sigma, size, rng):
    """Draw i.i.d. zero-mean samples with standard deviation ``sigma``.

    Uniform draws span ``[-sqrt(3) sigma, sqrt(3) sigma]``. Laplacian draws use
    the inverse CDF with scale ``b = sigma / sqrt(2)`` so that ``2 b**2`` equals
    the variance.
    """
    distribution = DistributionKind(distribution)
    if distribution is DistributionKind.UNIFORM:
        half = math.sqrt(3.0) * sigma
        return rng.uniform(-half, half, size)
    if distribution is DistributionKind.GAUSSIAN:
        return rng.normal(0.0, sigma, size)
    b = sigma / math.sqrt(2.0)
    u = rng.uniform(-0.5, 0.5, size)
    return -b * np.sign(u) * np.log1p(-2.0 * np.abs(u))


def lower_quantile(distribution, sigma, p):
    """Inverse CDF restricted to ``p <= 1/2``; the upper half follows by symmetry."""
    distribution = DistributionKind(distribution)
    p = np.asarray(p, dtype=np.float64)
    if distribution is DistributionKind.UNIFORM:
        return math.sqrt(3.0) * sigma * (2.0 * p - 1.0)
    if distribution is DistributionKind.GAUSSIAN:
        return sigma * ndtri(p)
    return sigma / math.sqrt(2.0) * np.log(2.0 * p)


def generate(spec: SignalSpec, seed: int = 0) -> SampleStream:
    """Materialise ``spec`` as a sample stream.

    Random processes use ``numpy.random.default_rng(seed)`` (PCG64), so a
    given ``(spec, seed)`` pair always yields the same samples.
    """
    spec.validate()
    n = spec.num_samples
    if n < 1:
        raise ConfigError("duration * sample_rate rounds to zero samples")
    if isinstance(spec.kind, SinusoidMixture):
        t = np.arange(n) / spec.sample_rate
        x = np.zeros(n)
        for c in spec.kind.components:
            x += c.amplitude * np.sin(2.0 * np.pi * c.frequency * t + c.phase)
    else:
        rng = np.random.default_rng(seed)
        x = draw(spec.kind.distribution, spec.kind.sigma, n, rng)
    return SampleStream(x, spec.sample_rate)


def lipschitz_bound(spec: SignalSpec) -> float:
    """Peak slope ``sum(a_i * 2*pi*f_i)`` of a sinusoid mixture, in V/s."""
    if not isinstance(spec.kind, SinusoidMixture):
        raise UnsupportedError("random processes have no finite Lipschitz bound")
    return float(sum(c.amplitude * 2.0 * math.pi * c.frequency for c in spec.kind.components))


def max_sampling_period(alpha: float, v_ref: float) -> float:
    """Largest sampling period that keeps consecutive samples within ``2 v_ref``.

    Returns ``math.inf`` for ``alpha == 0``: a constant signal never wraps.
    """
    if alpha < 0 or v_ref <= 0 or math.isnan(alpha) or math.isnan(v_ref):
        raise DomainError(f"need alpha >= 0 and v_ref > 0, got {alpha}, {v_ref}")
    if alpha == 0:
        return math.inf
    return 2.0 * v_ref / alpha


def max_increment(stream: SampleStream) -> float:
    """Largest ``|x[k] - x[k-1]|`` in the stream (0 for a single sample)."""
    if len(stream) < 2:
        return 0.0
    return float(np.max(np.abs(np.diff(stream.samples))))


def write_csv(stream: SampleStream, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for i, v in enumerate(stream.samples.tolist()):
            # repr() is the shortest string that round-trips the float64
            fh.write(f"{i},{v!r}\n")


def read_csv(path, sample_rate: float) -> SampleStream:
    """Read an ``index,volts`` file. The rate is not stored in the file."""
    values = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise ParseError(f"expected header {','.join(CSV_HEADER)!r}", line=1)
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 columns, got {len(row)}", line=line)
            try:
                index = int(row[0])
                value = float(row[1])
            except ValueError:
                raise ParseError(f"non-numeric cell in {row!r}", line=line) from None
            if index != len(values):
                raise ParseError(f"expected index {len(values)}, got {index}", line=line)
            if not math.isfinite(value):
                raise ParseError(f"non-finite value {row[1]!r}", line=line)
            values.append(value)
    if not values:
        raise ConfigError(f"{path}: no samples after header")
    return SampleStream(np.array(values), sample_rate)


def read_pcm_audio(path, full_scale_volts: float) -> SampleStream:
    """Read a mono 16-bit PCM WAV file, mapping code ``c`` to ``c/32768 * full_scale_volts``."""
    try:
        with wave.open(str(path), "rb") as w:
            channels, width, rate = w.getnchannels(), w.getsampwidth(), w.getframerate()
            frames = w.readframes(w.getnframes())
    except (wave.Error, EOFError) as exc:
        raise FormatError(f"{path}: {exc}") from None
    if channels != 1:
        raise FormatError(f"{path}: expected mono audio, got {channels} channels")
    if width != 2:
        raise FormatError(f"{path}: expected 16-bit samples, got {8 * width}-bit")
    raw = np.frombuffer(frames, dtype="<i2")
    if raw.size == 0:
        raise ConfigError(f"{path}: no audio frames")
    return SampleStream(raw.astype(np.float64) / PCM_FULL_SCALE * full_scale_volts, rate)


def write_pcm_audio(stream: SampleStream, path, full_scale_volts: float) -> None:
    """Inverse of :func:`read_pcm_audio`; samples beyond full scale are clipped."""
    if not float(stream.sample_rate).is_integer():
        raise ConfigError("WAV files need an integer sample rate")
    codes = np.rint(stream.samples / full_scale_volts * PCM_FULL_SCALE)
    codes = np.clip(codes, -PCM_FULL_SCALE, PCM_FULL_SCALE - 1).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(int(stream.sample_rate))
        w.writeframes(codes.tobytes())
