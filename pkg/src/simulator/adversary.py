"""
Network adversary.

The adversary controls every vehicle/RSU link (backbone messages to the KGC
are out of its reach) but holds no private keys. Per message it independently
decides to drop, tamper (flip one uniformly chosen bit) and replay (deliver a
copy of the original `replay_delay` epochs later). It also fabricates beacons
on STPs it has observed, with fresh messages and random signature components.
"""
import random
from dataclasses import replace
from typing import Iterable, List, Optional, Sequence

from src.protocols.aggregate import SignedBeacon
from src.protocols.signcryption import SystemParams
from src.simulator.config import AdversaryPolicy
from src.simulator.messages import BodyKind, NetMessage, Origin
from src.simulator.metrics import EventLog, RunMetrics
from src.utils.helpers import flip_bit
from src.utils.logger import get_logger
from settings import DEFAULT_REPLAY_DELAY

logger = get_logger(__name__)

ADVERSARY_ID = "adversary"


def inject_adversary(
    policy: AdversaryPolicy,
    stream: Iterable[NetMessage],
    rng: random.Random,
    replay_delay: int = DEFAULT_REPLAY_DELAY,
    horizon: Optional[int] = None,
    log: Optional[EventLog] = None,
    metrics: Optional[RunMetrics] = None
) -> List[NetMessage]:
    """
    Apply the policy to a stream of outbound messages.

    Args:
        policy: Drop, replay and tamper rates.
        stream: Messages in send order.
        rng: The adversary's own randomness.
        replay_delay: Epochs between a message and its replayed copy.
        horizon: Replayed copies due at or after this epoch are discarded.
        log: Receives one record per mutation with before/after digests.
        metrics: Receives dropped/tampered/replayed counts.

    Returns:
        Delivered messages in order, followed by replayed copies carrying
        `deliver_epoch`.
    """
    delivered: List[NetMessage] = []
    replays: List[NetMessage] = []
    for msg in stream:
        if msg.backbone:
            delivered.append(msg)
            continue

        dropped = rng.random() < policy.drop_rate
        tampered = rng.random() < policy.tamper_rate
        replayed = rng.random() < policy.replay_rate

        if replayed:
            due = msg.epoch + replay_delay
            if horizon is None or due < horizon:
                replays.append(replace(msg, origin=Origin.REPLAYED, deliver_epoch=due))
                if log is not None:
                    log.message_event("replay", ADVERSARY_ID, msg, msg.epoch, detail=f"due={due}")
                if metrics is not None:
                    metrics.messages_replayed += 1

        if dropped:
            if log is not None:
                log.message_event("drop", ADVERSARY_ID, msg, msg.epoch)
            if metrics is not None:
                metrics.messages_dropped += 1
            continue

        if tampered and msg.body:
            bit = rng.randrange(8 * len(msg.body))
            mutated = msg.mutated(flip_bit(msg.body, bit), Origin.TAMPERED)
            if log is not None:
                log.append(
                    msg.epoch, "tamper", ADVERSARY_ID,
                    kind=msg.kind.value, origin=Origin.TAMPERED.value,
                    before=msg.digest, after=mutated.digest, detail=f"bit={bit}"
                )
            if metrics is not None:
                metrics.messages_tampered += 1
            delivered.append(mutated)
        else:
            delivered.append(msg)

    return delivered + replays


def forge_beacons(
    params: SystemParams,
    policy: AdversaryPolicy,
    observed_stps: Sequence[bytes],
    rsu_ids: Sequence[str],
    epoch: int,
    rng: random.Random
) -> List[NetMessage]:
    """Fabricate `forgeries_per_epoch` beacons with random (S1, S2)."""
    suite = params.suite
    forged = []
    for i in range(policy.forgeries_per_epoch):
        if observed_stps:
            stp = observed_stps[rng.randrange(len(observed_stps))]
        else:
            stp = rng.randbytes(params.pseudonym_bytes)
        beacon = SignedBeacon(
            m=f"FORGED|e={epoch}|i={i}".encode(),
            stp=stp,
            S1=suite.random_g1(rng),
            S2=suite.random_g1(rng),
        )
        forged.append(NetMessage(
            sender=ADVERSARY_ID,
            recipient=rsu_ids[rng.randrange(len(rsu_ids))],
            epoch=epoch,
            phase=0,
            kind=BodyKind.BEACON,
            body=beacon.to_bytes(),
            origin=Origin.FORGED,
        ))
    if forged:
        logger.debug("Adversary fabricated %d beacons in epoch %d", len(forged), epoch)
    return forged
