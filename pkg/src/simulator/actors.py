"""
Actor state machines for vehicles, RSUs and the KGC.

`handle_message` is the single transition function the event loop calls. It
touches only the addressed actor's state (plus the shared context's counters
and log) and returns the outbound messages; the loop stays the single writer.

    vehicle  epoch start   -> signcrypted Request to its RSU
             Reply          -> unwrap, check nonce and validity, install STKs,
                               sign one beacon per STP up to beacon_rate
    RSU      Request        -> designcrypt, freshness and replay checks,
                               STP batch from the KGC, wrapped Reply
             Beacon         -> de-duplicate, verify_single, store
             epoch end      -> chunked aggregate, re_aggregate, verify,
                               forward to the hub (or keep, on the hub)
             Aggregate      -> (hub) verify_aggregate and keep for closing
    KGC      TraceRequest   -> trace the STP, compare with the issuance ledger
"""
import hashlib
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple, Union

from src.errors import AuthenticationError, CredentialError, EncodingError, SigncryptionRejected
from src.protocols.aggregate import (
    AggregateSignature,
    CommonString,
    CommonStringLedger,
    ShortTermCredential,
    SignedBeacon,
    aggregate,
    chunked,
    re_aggregate,
    sign_beacon,
    verify_aggregate,
    verify_single,
)
from src.protocols.pseudonyms import KgcState, ReplyPayload, Validity, VehicleChannelKey, unwrap_reply, wrap_reply
from src.protocols.signcryption import (
    LongTermCredential,
    RequestPlaintext,
    RsuCredential,
    SigncryptedEnvelope,
    SystemParams,
    designcrypt,
    signcrypt,
)
from src.simulator.config import ScenarioConfig
from src.simulator.messages import BodyKind, NetMessage
from src.simulator.metrics import EventLog, RunMetrics
from src.utils.helpers import digest_hex
from src.utils.logger import get_logger
from settings import NONCE_BYTES

logger = get_logger(__name__)

KGC_ID = "kgc"
HUB_ID = "rsu-0"

PHASE_TRAFFIC = 0
PHASE_AGGREGATION = 1
PHASE_HUB_CLOSE = 2


@dataclass
class SimulationContext:
    params: SystemParams
    kgc: KgcState
    config: ScenarioConfig
    rng: random.Random
    metrics: RunMetrics
    log: EventLog
    epoch: int = 0
    _common_strings: Dict[int, CommonString] = field(default_factory=dict, repr=False)
    _issued_rids: Dict[bytes, bytes] = field(default_factory=dict, repr=False)
    aggregated: Dict[int, Set[Tuple[bytes, bytes]]] = field(default_factory=dict, repr=False)

    def common_string(self, epoch: Optional[int] = None) -> CommonString:
        """CS for an epoch: SHA-256("CS" || epoch || seed), standing in for CS synchronization."""
        epoch = self.epoch if epoch is None else epoch
        if epoch not in self._common_strings:
            digest = hashlib.sha256(
                b"CS" + epoch.to_bytes(4, "big") + self.config.seed.to_bytes(8, "big")
            ).digest()
            self._common_strings[epoch] = CommonString(digest, epoch)
        return self._common_strings[epoch]

    def timed(self, op: str, func, *args, **kwargs):
        return self.metrics.timings.timed(op)(func)(*args, **kwargs)

    def issued_rid(self, pseudonym: bytes) -> Optional[bytes]:
        if len(self._issued_rids) != len(self.kgc.issued):
            self._issued_rids = {record.pseudonym: record.rid for record in self.kgc.issued}
        return self._issued_rids.get(pseudonym)

    def violation(self, actor: str, detail: str) -> None:
        self.metrics.invariant_violations += 1
        self.log.append(self.epoch, "audit", actor, detail=detail)
        logger.error("Invariant violated at %s in epoch %d: %s", actor, self.epoch, detail)

    def accept(self, actor: str, msg: NetMessage, detail: Optional[str] = None) -> None:
        self.metrics.record_outcome(msg, accepted=True)
        self.log.message_event("accept", actor, msg, self.epoch, detail)

    def reject(self, actor: str, msg: NetMessage, detail: str) -> None:
        self.metrics.record_outcome(msg, accepted=False)
        self.log.message_event("reject", actor, msg, self.epoch, detail)
        logger.warning("%s rejected a %s %s: %s", actor, msg.origin.value, msg.kind.value, detail)


@dataclass
class VehicleState:
    vehicle_id: str
    rid: bytes
    credential: LongTermCredential = field(repr=False)
    channel_key: VehicleChannelKey = field(repr=False)
    rsu_id: str
    pending_nonce: Optional[int] = None
    short_term: List[ShortTermCredential] = field(default_factory=list, repr=False)
    installed: List[ShortTermCredential] = field(default_factory=list, repr=False)
    ledger: CommonStringLedger = field(default_factory=CommonStringLedger, repr=False)
    completed_epochs: Set[int] = field(default_factory=set)
    sent_beacons: Dict[int, Set[Tuple[bytes, bytes]]] = field(default_factory=dict, repr=False)


@dataclass
class RsuState:
    rsu_id: str
    credential: RsuCredential = field(repr=False)
    seen_requests: Dict[Tuple[int, bytes], int] = field(default_factory=dict)
    seen_beacons: Set[Tuple[bytes, bytes]] = field(default_factory=set)
    stored: List[SignedBeacon] = field(default_factory=list)
    own_aggregate: Optional[AggregateSignature] = None
    received: List[AggregateSignature] = field(default_factory=list)
    seen_aggregates: Set[str] = field(default_factory=set)

    @property
    def is_hub(self) -> bool:
        return self.rsu_id == HUB_ID


Actor = Union[VehicleState, RsuState, KgcState]


def start_request(vehicle: VehicleState, ctx: SimulationContext) -> List[NetMessage]:
    """Request (epoch 0) or Update (later epochs): signcrypt (n, LTP, tau) to the vehicle's RSU."""
    n = int.from_bytes(ctx.rng.randbytes(NONCE_BYTES), "big")
    vehicle.pending_nonce = n
    vehicle.short_term = []
    request = RequestPlaintext(n=n, ltp=vehicle.credential.ltp, tau=ctx.epoch)
    id_r = rsu_identity(vehicle.rsu_id)
    env = ctx.timed("signcrypt", signcrypt, ctx.params, vehicle.credential, request, id_r, ctx.rng)
    return [NetMessage(vehicle.vehicle_id, vehicle.rsu_id, ctx.epoch, PHASE_TRAFFIC, BodyKind.ENVELOPE, env.to_bytes())]


def rsu_identity(rsu_id: str) -> bytes:
    return rsu_id.upper().encode("utf-8")


def handle_message(actor: Actor, msg: NetMessage, ctx: SimulationContext) -> Tuple[Actor, List[NetMessage]]:
    """Dispatch one delivered message; decode or verification failures count as rejections."""
    if isinstance(actor, VehicleState):
        handlers = {BodyKind.REPLY: _vehicle_on_reply}
    elif isinstance(actor, RsuState):
        handlers = {
            BodyKind.ENVELOPE: _rsu_on_envelope,
            BodyKind.BEACON: _rsu_on_beacon,
            BodyKind.AGGREGATE: _rsu_on_aggregate,
        }
    else:
        handlers = {BodyKind.TRACE_REQUEST: _kgc_on_trace_request}

    handler = handlers.get(msg.kind)
    if handler is None:
        ctx.reject(msg.recipient, msg, f"unexpected {msg.kind.value}")
        return actor, []
    return actor, handler(actor, msg, ctx)


def _vehicle_on_reply(vehicle: VehicleState, msg: NetMessage, ctx: SimulationContext) -> List[NetMessage]:
    try:
        payload = unwrap_reply(ctx.params, vehicle.channel_key, msg.body)
    except AuthenticationError as e:
        ctx.reject(vehicle.vehicle_id, msg, f"reply authentication: {e}")
        return []
    if vehicle.pending_nonce is None or payload.request_nonce != vehicle.pending_nonce:
        ctx.reject(vehicle.vehicle_id, msg, "reply does not answer the pending request")
        return []
    if not payload.validity.covers(ctx.epoch):
        ctx.reject(vehicle.vehicle_id, msg, "reply validity does not cover this epoch")
        return []

    vehicle.pending_nonce = None
    vehicle.short_term = list(payload.credentials)
    vehicle.installed.extend(payload.credentials)
    vehicle.completed_epochs.add(ctx.epoch)
    ctx.accept(vehicle.vehicle_id, msg, f"installed {len(payload.credentials)} STPs")

    cs = ctx.common_string()
    outbound = []
    for i, cred in enumerate(vehicle.short_term[:ctx.config.beacon_rate]):
        m = f"{vehicle.vehicle_id}|e={ctx.epoch}|i={i}".encode("utf-8")
        beacon = ctx.timed("sign", sign_beacon, ctx.params, cred, m, cs, ctx.rng, vehicle.ledger)
        vehicle.sent_beacons.setdefault(ctx.epoch, set()).add((m, cred.stp))
        outbound.append(
            NetMessage(vehicle.vehicle_id, vehicle.rsu_id, ctx.epoch, PHASE_TRAFFIC, BodyKind.BEACON, beacon.to_bytes())
        )
    return outbound


def _rsu_on_envelope(rsu: RsuState, msg: NetMessage, ctx: SimulationContext) -> List[NetMessage]:
    params = ctx.params
    try:
        env = SigncryptedEnvelope.from_bytes(params, msg.body)
        request, _ = ctx.timed("designcrypt", designcrypt, params, rsu.credential, env)
    except SigncryptionRejected as e:
        ctx.reject(rsu.rsu_id, msg, f"designcrypt {e.reason.value}")
        return []

    if abs(ctx.epoch - request.tau) > ctx.config.freshness_window:
        ctx.reject(rsu.rsu_id, msg, f"stale timestamp tau={request.tau}")
        return []
    if (request.n, request.ltp) in rsu.seen_requests:
        ctx.reject(rsu.rsu_id, msg, "duplicate request nonce")
        return []
    try:
        channel_key = ctx.kgc.channel_key_for(request.ltp)
    except CredentialError:
        ctx.reject(rsu.rsu_id, msg, "LTP is not registered")
        return []

    rsu.seen_requests[(request.n, request.ltp)] = request.tau
    validity = Validity(ctx.epoch, ctx.epoch)
    batch = ctx.kgc.issue_short_term_batch(request.ltp, ctx.config.stp_batch, validity)
    payload = ReplyPayload(request.n, tuple(cred for _, cred in batch), validity)
    ciphertext = wrap_reply(params, channel_key, payload, ctx.rng)
    ctx.accept(rsu.rsu_id, msg)
    return [NetMessage(rsu.rsu_id, msg.sender, ctx.epoch, PHASE_TRAFFIC, BodyKind.REPLY, ciphertext)]


def _rsu_on_beacon(rsu: RsuState, msg: NetMessage, ctx: SimulationContext) -> List[NetMessage]:
    try:
        beacon = SignedBeacon.from_bytes(ctx.params, msg.body)
    except EncodingError as e:
        ctx.reject(rsu.rsu_id, msg, f"beacon decode: {e}")
        return []
    key = (beacon.m, beacon.stp)
    if key in rsu.seen_beacons:
        ctx.reject(rsu.rsu_id, msg, "duplicate beacon under this common string")
        return []
    if not ctx.timed("verify_single", verify_single, ctx.params, beacon, ctx.common_string()):
        ctx.reject(rsu.rsu_id, msg, "beacon signature")
        return []
    rsu.seen_beacons.add(key)
    rsu.stored.append(beacon)
    ctx.accept(rsu.rsu_id, msg)
    return []


def _rsu_on_aggregate(rsu: RsuState, msg: NetMessage, ctx: SimulationContext) -> List[NetMessage]:
    if not rsu.is_hub:
        ctx.reject(rsu.rsu_id, msg, "only the hub accepts aggregates")
        return []
    try:
        agg = AggregateSignature.from_bytes(ctx.params, msg.body)
    except EncodingError as e:
        ctx.reject(rsu.rsu_id, msg, f"aggregate decode: {e}")
        return []
    if msg.digest in rsu.seen_aggregates:
        ctx.reject(rsu.rsu_id, msg, "duplicate aggregate")
        return []
    if not ctx.timed("verify_aggregate", verify_aggregate, ctx.params, agg, ctx.common_string()):
        ctx.reject(rsu.rsu_id, msg, "aggregate signature")
        return []
    rsu.seen_aggregates.add(msg.digest)
    rsu.received.append(agg)
    ctx.accept(rsu.rsu_id, msg, f"entries={len(agg.entries)}")
    return []


def _kgc_on_trace_request(kgc: KgcState, msg: NetMessage, ctx: SimulationContext) -> List[NetMessage]:
    rid = kgc.trace(msg.body, ctx.epoch, ctx.config.strict_trace)
    expected = ctx.issued_rid(msg.body)
    if rid is not None and rid == expected:
        ctx.metrics.trace_successes += 1
        ctx.log.message_event("trace", KGC_ID, msg, ctx.epoch, detail="resolved")
    else:
        ctx.metrics.trace_failures += 1
        ctx.log.message_event("trace", KGC_ID, msg, ctx.epoch, detail="unresolved")
        ctx.violation(KGC_ID, f"sampled STP {digest_hex(msg.body)} did not trace")
    return []


def close_epoch(rsu: RsuState, ctx: SimulationContext) -> List[NetMessage]:
    """Aggregate the epoch's stored beacons in chunks, re-aggregate and verify."""
    stored, rsu.stored = rsu.stored, []
    rsu.seen_beacons = set()
    # replays older than the freshness window already fail the timestamp check
    oldest = ctx.epoch - ctx.config.freshness_window
    rsu.seen_requests = {key: tau for key, tau in rsu.seen_requests.items() if tau >= oldest}
    if not stored:
        return []

    params = ctx.params
    chunks = [aggregate(params, chunk) for chunk in chunked(stored, ctx.config.aggregate_chunk)]
    agg = re_aggregate(params, chunks)
    if len(agg.entries) != len(stored):
        ctx.violation(rsu.rsu_id, f"aggregate has {len(agg.entries)} entries for {len(stored)} beacons")
    if not ctx.timed("verify_aggregate", verify_aggregate, params, agg, ctx.common_string()):
        ctx.violation(rsu.rsu_id, "own aggregate failed verification")
    ctx.log.append(ctx.epoch, "aggregate", rsu.rsu_id, detail=f"entries={len(agg.entries)} chunks={len(chunks)}")

    if rsu.is_hub:
        rsu.own_aggregate = agg
        return []
    return [NetMessage(rsu.rsu_id, HUB_ID, ctx.epoch, PHASE_AGGREGATION, BodyKind.AGGREGATE, agg.to_bytes())]


def close_hub(hub: RsuState, ctx: SimulationContext) -> List[NetMessage]:
    """Re-aggregate across RSUs, verify, and sample STPs for tracing over the backbone."""
    parts = ([hub.own_aggregate] if hub.own_aggregate is not None else []) + hub.received
    hub.own_aggregate, hub.received, hub.seen_aggregates = None, [], set()
    if not parts:
        return []

    final = re_aggregate(ctx.params, parts)
    expected_entries = sum(len(part.entries) for part in parts)
    if len(final.entries) != expected_entries:
        ctx.violation(hub.rsu_id, "re-aggregation lost entries")
    if not ctx.timed("verify_aggregate", verify_aggregate, ctx.params, final, ctx.common_string()):
        ctx.violation(hub.rsu_id, "re-aggregated signature failed verification")
    ctx.log.append(ctx.epoch, "aggregate", hub.rsu_id, detail=f"final entries={len(final.entries)} parts={len(parts)}")

    ctx.aggregated.setdefault(ctx.epoch, set()).update(final.entries)

    stps = sorted({stp for _, stp in final.entries})
    sample = ctx.rng.sample(stps, min(ctx.config.trace_sample, len(stps)))
    return [
        NetMessage(hub.rsu_id, KGC_ID, ctx.epoch, PHASE_HUB_CLOSE, BodyKind.TRACE_REQUEST, stp, backbone=True)
        for stp in sample
    ]
