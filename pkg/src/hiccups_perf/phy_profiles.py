"""PHY/MAC timing constants for 802.11 variants and the BER-to-FER mapping.

Every airtime used by the throughput models is derived from a
:class:`PhyProfile`. One profile ships built in (ERP-OFDM at 54 Mbps,
short-slot parameter set); any constant can be overridden through a flat
``key = value`` config file, see :func:`load_profile`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

# OFDM symbol duration and per-frame service/tail overhead.
SYMBOL_US = 4.0
SERVICE_BITS = 16
TAIL_BITS = 6

ACK_BYTES = 14


@dataclass(frozen=True)
class PhyProfile:
    """Timing and contention constants for one 802.11 variant.

    Durations are in microseconds, the data rate in Mbit/s, contention
    windows in slots. Instances are immutable and safe to share between
    threads.
    """

    name: str
    rate_mbps: float
    slot_us: float
    sifs_us: float
    difs_us: float
    eifs_us: float
    phy_hdr_us: float
    ack_us: float
    prop_delay_us: float
    w0: int
    m: int
    m_prime: int

    def __post_init__(self):
        for field in ("slot_us", "sifs_us", "difs_us", "eifs_us",
                      "phy_hdr_us", "ack_us", "prop_delay_us"):
            if getattr(self, field) < 0:
                raise ValueError(f"{field} must be >= 0, got {getattr(self, field)}")
        if self.rate_mbps <= 0:
            raise ValueError(f"rate_mbps must be > 0, got {self.rate_mbps}")
        if self.w0 < 2:
            raise ValueError(f"w0 must be >= 2, got {self.w0}")
        if self.m < 0 or self.m_prime < 0:
            raise ValueError("m and m_prime must be >= 0")
        if not self.difs_us > self.sifs_us:
            raise ValueError("difs_us must exceed sifs_us")
        if not self.eifs_us > self.difs_us:
            raise ValueError("eifs_us must exceed difs_us")

    @property
    def bits_per_symbol(self) -> float:
        return self.rate_mbps * SYMBOL_US


def erp_ofdm_54() -> PhyProfile:
    """Default profile: ERP-OFDM at 54 Mbit/s, short slot.

    DIFS = SIFS + 2*slot, EIFS = SIFS + ACK airtime + DIFS. The ACK (14
    bytes) is sent at the data rate and occupies the PHY header plus one
    whole OFDM symbol.
    """
    rate = 54.0
    slot = 9.0
    sifs = 10.0
    difs = sifs + 2.0 * slot
    phy_hdr = 20.0
    ack_symbols = math.ceil((SERVICE_BITS + 8 * ACK_BYTES + TAIL_BITS) / (rate * SYMBOL_US))
    ack = phy_hdr + ack_symbols * SYMBOL_US
    return PhyProfile(
        name="erp-ofdm-54",
        rate_mbps=rate,
        slot_us=slot,
        sifs_us=sifs,
        difs_us=difs,
        eifs_us=sifs + ack + difs,
        phy_hdr_us=phy_hdr,
        ack_us=ack,
        prop_delay_us=1.0,
        w0=16,
        m=5,
        m_prime=5,
    )


BUILTIN_PROFILES = {"erp-ofdm-54": erp_ofdm_54}


def t_data(profile: PhyProfile, frame_bytes: int, quantized: bool = False) -> float:
    """Airtime of the MAC frame body, in microseconds.

    Default is the ideal mode, ``8 * frame_bytes / rate``. With
    ``quantized=True`` the duration is rounded up to whole OFDM symbols,
    service and tail bits included.
    """
    if frame_bytes <= 0:
        raise ValueError(f"frame_bytes must be > 0, got {frame_bytes}")
    if not quantized:
        return 8.0 * frame_bytes / profile.rate_mbps
    bits = SERVICE_BITS + TAIL_BITS + 8 * frame_bytes
    return math.ceil(bits / profile.bits_per_symbol) * SYMBOL_US


def fer_from_ber(ber: float, frame_bytes: int) -> float:
    """Frame error rate under independent bit errors: 1 - (1-BER)^(8L).

    ``frame_bytes`` counts every FCS-protected byte of the frame.
    """
    if not 0.0 <= ber <= 1.0:
        raise ValueError(f"ber must be in [0, 1], got {ber}")
    if frame_bytes <= 0:
        raise ValueError(f"frame_bytes must be > 0, got {frame_bytes}")
    if ber == 1.0:
        return 1.0
    # -expm1(n*log1p(-ber)) keeps precision for tiny BER.
    return -math.expm1(8 * frame_bytes * math.log1p(-ber))


_INT_FIELDS = {"w0", "m", "m_prime"}
_FLOAT_FIELDS = {
    "rate_mbps", "slot_us", "sifs_us", "difs_us", "eifs_us",
    "phy_hdr_us", "ack_us", "prop_delay_us",
}


def load_profile(path: str, base: PhyProfile | None = None) -> PhyProfile:
    """Read profile overrides from a flat ``key = value`` text file.

    Keys are :class:`PhyProfile` field names (durations in us, rate in
    Mbps). Missing keys keep the value from ``base`` (default: the
    built-in ERP-OFDM 54 profile). Unknown keys are hard errors. Blank
    lines and ``#`` comments are ignored.
    """
    profile = base if base is not None else erp_ofdm_54()
    overrides = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "name":
                overrides[key] = value
            elif key in _INT_FIELDS:
                overrides[key] = int(value)
            elif key in _FLOAT_FIELDS:
                overrides[key] = float(value)
            else:
                raise ValueError(f"{path}:{lineno}: unknown profile key {key!r}")
    return replace(profile, **overrides)


def resolve_profile(name_or_path: str) -> PhyProfile:
    """Map a CLI ``--profile`` argument to a profile.

    Built-in names are looked up first; anything else is treated as a
    config-file path.
    """
    if name_or_path in BUILTIN_PROFILES:
        return BUILTIN_PROFILES[name_or_path]()
    if os.path.exists(name_or_path):
        return load_profile(name_or_path)
    raise ValueError(
        f"unknown profile {name_or_path!r}: not a built-in name "
        f"({', '.join(sorted(BUILTIN_PROFILES))}) and no such file"
    )
