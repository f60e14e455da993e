"""
Simulation Engine
=================

Single-threaded discrete-event loop over logical time. Events sit in a heap
keyed by (epoch, phase, sequence):

    phase 0  traffic          epoch start (Request/Update, forgeries), every
                              vehicle/RSU message and its consequences
    phase 1  aggregation      RSUs aggregate stored beacons, forward to the hub
    phase 2  hub close        cross-RSU re-aggregation and trace sampling

Network traffic passes through the adversary before it is scheduled; trace
requests use the trusted backbone. Nothing depends on wall-clock time, so
(RunMetrics, EventLog) are a pure function of the scenario.
"""
import heapq
import itertools
import math
import random
from dataclasses import dataclass
from typing import Dict, List, Tuple

from src.errors import EncodingError
from src.pairing import BackendId
from src.protocols.aggregate import SignedBeacon, extract_short_term_key
from src.protocols.pseudonyms import KgcState
from src.protocols.signcryption import extract_rsu_key, setup
from src.simulator.actors import (
    HUB_ID,
    KGC_ID,
    PHASE_AGGREGATION,
    PHASE_HUB_CLOSE,
    PHASE_TRAFFIC,
    RsuState,
    SimulationContext,
    VehicleState,
    close_epoch,
    close_hub,
    handle_message,
    rsu_identity,
    start_request,
)
from src.simulator.adversary import forge_beacons, inject_adversary
from src.simulator.config import ScenarioConfig
from src.simulator.messages import BodyKind, NetMessage
from src.simulator.metrics import EventLog, RunMetrics
from src.utils.logger import get_logger
from settings import EXTERNAL_SECURITY_LEVEL, TOY_ACCIDENTAL_ACCEPT_RATE, TOY_SECURITY_LEVEL

logger = get_logger(__name__)


@dataclass(frozen=True)
class _Control:
    action: str


class Simulation:
    """One scenario run. Build it, call `run()`, read `metrics` and `log`."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.metrics = RunMetrics()
        self.log = EventLog()
        self._queue: List[Tuple[int, int, int, object]] = []
        self._seq = itertools.count()
        self._observed_stps: List[bytes] = []
        self.adversary_rng = random.Random(f"adversary:{config.seed}")

        protocol_rng = random.Random(f"protocol:{config.seed}")
        security = TOY_SECURITY_LEVEL if config.backend == BackendId.TOY.value else EXTERNAL_SECURITY_LEVEL
        params, master = setup(security, config.backend, rng=protocol_rng, cipher=config.cipher)
        kgc = KgcState(params, master, protocol_rng)
        self.ctx = SimulationContext(params, kgc, config, protocol_rng, self.metrics, self.log)

        self.rsus: Dict[str, RsuState] = {}
        for j in range(config.rsus):
            rsu_id = f"rsu-{j}"
            self.rsus[rsu_id] = RsuState(rsu_id, extract_rsu_key(params, master, rsu_identity(rsu_id)))

        self.vehicles: Dict[str, VehicleState] = {}
        for i in range(config.vehicles):
            rid = f"RID-{i:04d}".encode("utf-8")
            credential, channel_key = kgc.register_vehicle(rid)
            vehicle_id = f"veh-{i}"
            self.vehicles[vehicle_id] = VehicleState(
                vehicle_id, rid, credential, channel_key, rsu_id=f"rsu-{i % config.rsus}"
            )

    # Scheduling

    def _push(self, epoch: int, phase: int, item: object) -> None:
        heapq.heappush(self._queue, (epoch, phase, next(self._seq), item))

    def _send(self, outbound: List[NetMessage]) -> None:
        network = [msg for msg in outbound if not msg.backbone]
        for msg in outbound:
            if msg.backbone:
                self._push(msg.epoch, msg.phase, msg)

        delivered = inject_adversary(
            self.config.adversary, network, self.adversary_rng,
            replay_delay=self.config.replay_delay, horizon=self.config.epochs,
            log=self.log, metrics=self.metrics
        )
        for msg in delivered:
            self._observe(msg)
            epoch = msg.deliver_epoch if msg.deliver_epoch is not None else msg.epoch
            self._push(epoch, msg.phase, msg)

    def _observe(self, msg: NetMessage) -> None:
        if msg.kind is not BodyKind.BEACON or msg.adversarial:
            return
        try:
            self._observed_stps.append(SignedBeacon.from_bytes(self.ctx.params, msg.body).stp)
        except EncodingError:
            pass

    # Control events

    def _start_epoch(self, epoch: int) -> None:
        self.ctx.epoch = epoch
        self.log.append(epoch, "epoch_start", "engine")
        for vehicle in self.vehicles.values():
            self._send(start_request(vehicle, self.ctx))

        forged = forge_beacons(
            self.ctx.params, self.config.adversary, self._observed_stps,
            sorted(self.rsus), epoch, self.adversary_rng
        )
        for msg in forged:
            self.metrics.forgeries_injected += 1
            self.log.message_event("forge", msg.sender, msg, epoch)
            self._push(epoch, msg.phase, msg)

    def _end_epoch(self, epoch: int) -> None:
        for rsu_id in sorted(self.rsus):
            self._send(close_epoch(self.rsus[rsu_id], self.ctx))

    def _close_hub(self, epoch: int) -> None:
        self._send(close_hub(self.rsus[HUB_ID], self.ctx))
        logger.info("Epoch %d finished: %d events logged so far", epoch, len(self.log))

    def _deliver(self, msg: NetMessage) -> None:
        if msg.recipient == KGC_ID:
            actor = self.ctx.kgc
        else:
            actor = self.vehicles.get(msg.recipient) or self.rsus.get(msg.recipient)
        if actor is None:
            logger.debug("Dropping message for unknown recipient %s", msg.recipient)
            return
        _, outbound = handle_message(actor, msg, self.ctx)
        self._send(outbound)

    # Run

    def run(self) -> Tuple[RunMetrics, EventLog]:
        for epoch in range(self.config.epochs):
            self._push(epoch, PHASE_TRAFFIC, _Control("start"))
            self._push(epoch, PHASE_AGGREGATION, _Control("end"))
            self._push(epoch, PHASE_HUB_CLOSE, _Control("hub"))

        actions = {"start": self._start_epoch, "end": self._end_epoch, "hub": self._close_hub}
        while self._queue:
            epoch, _, _, item = heapq.heappop(self._queue)
            self.ctx.epoch = epoch
            if isinstance(item, _Control):
                actions[item.action](epoch)
            else:
                self._deliver(item)

        self._audit()
        logger.info(
            "Run finished: %d envelopes, %d beacons, %d aggregates accepted; "
            "%d adversary successes, %d invariant violations",
            self.metrics.envelopes_accepted, self.metrics.beacons_accepted,
            self.metrics.aggregates_accepted, self.metrics.adversary_successes,
            self.metrics.invariant_violations
        )
        return self.metrics, self.log

    # Audits

    def safety_threshold(self) -> int:
        if self.ctx.params.suite.backend_id is not BackendId.TOY:
            return 0
        return max(1, math.ceil(self.metrics.adversarial_deliveries * TOY_ACCIDENTAL_ACCEPT_RATE))

    def _audit(self) -> None:
        ctx = self.ctx
        ctx.epoch = self.config.epochs - 1

        for record in ctx.kgc.sweep_traceability():
            ctx.violation(KGC_ID, f"{record.kind.name} pseudonym does not trace to its RID")

        for vehicle in self.vehicles.values():
            for cred in vehicle.installed:
                expected = extract_short_term_key(ctx.params, ctx.kgc.master, cred.stp)
                if (cred.D0, cred.D1) != (expected.D0, expected.D1):
                    ctx.violation(vehicle.vehicle_id, "installed STK differs from the KGC extraction")

        if not self.metrics.is_conserved():
            ctx.violation("engine", "accepted + rejected != delivered")

        if self.metrics.honest_rejections:
            ctx.violation("engine", f"{self.metrics.honest_rejections} untampered honest messages rejected")

        policy = self.config.adversary
        if policy.drop_rate == 0 and policy.tamper_rate == 0:
            every_epoch = set(range(self.config.epochs))
            for vehicle in self.vehicles.values():
                if vehicle.completed_epochs != every_epoch:
                    missing = sorted(every_epoch - vehicle.completed_epochs)
                    ctx.violation(vehicle.vehicle_id, f"no credentials installed in epochs {missing}")
                for epoch, sent in sorted(vehicle.sent_beacons.items()):
                    lost = len(sent - ctx.aggregated.get(epoch, set()))
                    if lost:
                        ctx.violation(
                            vehicle.vehicle_id,
                            f"{lost} of {len(sent)} beacons from epoch {epoch} missing from the final aggregate"
                        )

        threshold = self.safety_threshold()
        if self.metrics.adversary_successes > threshold:
            ctx.violation(
                "engine",
                f"{self.metrics.adversary_successes} adversary acceptances exceed the threshold {threshold}"
            )


def run_scenario(config: ScenarioConfig) -> Tuple[RunMetrics, EventLog]:
    """Execute every epoch of the scenario and return its metrics and event log."""
    logger.info(
        "Running %d vehicles, %d RSUs, %d epochs on the %s backend (seed=%d)",
        config.vehicles, config.rsus, config.epochs, config.backend, config.seed
    )
    return Simulation(config).run()

