"""
Run metrics and the deterministic event log.

`RunMetrics` counts deliveries per message class so that, for every class,
accepted + rejected equals the number of messages handed to an actor.
Wall-clock timings live in a separate `TimingRegistry` and never reach
metrics.csv or events.jsonl, which are pure functions of the scenario.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.models.records import IEventRecord, IMetricsRow
from src.simulator.messages import BodyKind, NetMessage
from src.utils.decorators import TimingRegistry
from src.utils.writer import render_jsonl


_COUNTED_KINDS = {
    BodyKind.ENVELOPE: "envelopes",
    BodyKind.REPLY: "replies",
    BodyKind.BEACON: "beacons",
    BodyKind.AGGREGATE: "aggregates",
}


@dataclass
class RunMetrics:
    envelopes_accepted: int = 0
    envelopes_rejected: int = 0
    replies_accepted: int = 0
    replies_rejected: int = 0
    beacons_accepted: int = 0
    beacons_rejected: int = 0
    aggregates_accepted: int = 0
    aggregates_rejected: int = 0
    messages_dropped: int = 0
    messages_tampered: int = 0
    messages_replayed: int = 0
    forgeries_injected: int = 0
    trace_successes: int = 0
    trace_failures: int = 0
    adversary_successes: int = 0
    invariant_violations: int = 0
    adversarial_deliveries: int = 0
    honest_rejections: int = 0
    delivered: Dict[str, int] = field(default_factory=dict)
    timings: TimingRegistry = field(default_factory=TimingRegistry, repr=False, compare=False)

    def record_outcome(self, msg: NetMessage, accepted: bool) -> None:
        prefix = _COUNTED_KINDS.get(msg.kind)
        if prefix is None:
            return
        self.delivered[prefix] = self.delivered.get(prefix, 0) + 1
        attr = f"{prefix}_{'accepted' if accepted else 'rejected'}"
        setattr(self, attr, getattr(self, attr) + 1)
        if msg.adversarial:
            self.adversarial_deliveries += 1
            if accepted:
                self.adversary_successes += 1
        elif not accepted:
            self.honest_rejections += 1

    def is_conserved(self) -> bool:
        """accepted + rejected == delivered for every message class."""
        return all(
            getattr(self, f"{prefix}_accepted") + getattr(self, f"{prefix}_rejected")
            == self.delivered.get(prefix, 0)
            for prefix in _COUNTED_KINDS.values()
        )

    def as_row(self, seed: int, backend: str, vehicles: int, rsus: int, epochs: int) -> IMetricsRow:
        return IMetricsRow(
            seed=seed,
            backend=backend,
            vehicles=vehicles,
            rsus=rsus,
            epochs=epochs,
            envelopes_accepted=self.envelopes_accepted,
            envelopes_rejected=self.envelopes_rejected,
            replies_accepted=self.replies_accepted,
            replies_rejected=self.replies_rejected,
            beacons_accepted=self.beacons_accepted,
            beacons_rejected=self.beacons_rejected,
            aggregates_accepted=self.aggregates_accepted,
            aggregates_rejected=self.aggregates_rejected,
            messages_dropped=self.messages_dropped,
            messages_tampered=self.messages_tampered,
            messages_replayed=self.messages_replayed,
            forgeries_injected=self.forgeries_injected,
            trace_successes=self.trace_successes,
            trace_failures=self.trace_failures,
            adversary_successes=self.adversary_successes,
            invariant_violations=self.invariant_violations,
        )


class EventLog:
    """Append-only list of event records; `seq` is assigned on append."""

    def __init__(self):
        self.records: List[IEventRecord] = []

    def append(self, epoch: int, event: str, actor: str, **extra: Any) -> IEventRecord:
        record: IEventRecord = {"seq": len(self.records), "epoch": epoch, "event": event, "actor": actor}
        record.update({k: v for k, v in extra.items() if v is not None})
        self.records.append(record)
        return record

    def message_event(self, event: str, actor: str, msg: NetMessage, epoch: int, detail: Optional[str] = None) -> IEventRecord:
        return self.append(
            epoch, event, actor,
            kind=msg.kind.value, origin=msg.origin.value, digest=msg.digest, detail=detail
        )

    def of_type(self, event: str) -> List[IEventRecord]:
        return [record for record in self.records if record["event"] == event]

    def to_jsonl(self) -> str:
        return render_jsonl(self.records)

    def __len__(self) -> int:
        return len(self.records)
