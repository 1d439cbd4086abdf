"""Pitch, frequency and wavelength conversions (equal temperament, A4 = 440 Hz)."""

import math

__all__ = ["freq_to_pitch", "pitch_to_freq", "wavelength", "speed_of_sound"]

A4_HZ = 440.0
A4_PITCH = 69.0


def freq_to_pitch(f: float) -> float:
    """Real-valued MIDI pitch number of a frequency in Hz."""
    if not f > 0:
        raise ValueError(f"frequency must be positive, got {f!r}")
    return A4_PITCH + 12.0 * math.log2(f / A4_HZ)


def pitch_to_freq(p: float) -> float:
    if not math.isfinite(p):
        raise ValueError(f"pitch must be finite, got {p!r}")
    return A4_HZ * 2.0 ** ((p - A4_PITCH) / 12.0)


def speed_of_sound(temperature_c: float) -> float:
    """Approximate speed of sound in dry air (m/s), valid near 0 degC."""
    return 331.0 + 0.6 * temperature_c


def wavelength(f: float, temperature_c: float = 20.0) -> float:
    """Wavelength in metres of a tone of frequency ``f`` Hz in air."""
    if not f > 0:
        raise ValueError(f"frequency must be positive, got {f!r}")
    v = speed_of_sound(temperature_c)
    if not v > 0:
        raise ValueError(f"speed of sound is non-positive at {temperature_c} degC")
    return v / f
