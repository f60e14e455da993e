from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from src.utils.helpers import digest_hex


class BodyKind(str, Enum):
    ENVELOPE = "envelope"
    REPLY = "reply"
    BEACON = "beacon"
    AGGREGATE = "aggregate"
    TRACE_REQUEST = "trace_request"


class Origin(str, Enum):
    """Who put the message on the wire. Only HONEST traffic comes from key holders."""
    HONEST = "honest"
    TAMPERED = "tampered"
    REPLAYED = "replayed"
    FORGED = "forged"


@dataclass(frozen=True)
class NetMessage:
    """
    A message in flight. `body` holds the wire encoding of the producing
    module, so adversarial mutation operates on real bytes.

    `deliver_epoch` is None for immediate delivery and set on replayed copies.
    """
    sender: str
    recipient: str
    epoch: int
    phase: int
    kind: BodyKind
    body: bytes
    origin: Origin = Origin.HONEST
    backbone: bool = False
    deliver_epoch: Optional[int] = None

    @property
    def digest(self) -> str:
        return digest_hex(self.body)

    @property
    def adversarial(self) -> bool:
        return self.origin is not Origin.HONEST

    def mutated(self, body: bytes, origin: Origin) -> "NetMessage":
        return replace(self, body=body, origin=origin)
