from typing import Optional, TypedDict


class IMetricsRow(TypedDict):
    """
    One row of metrics.csv, written once per simulation run.

    Attributes:
        seed (int): The scenario seed that produced the run.
        backend (str): "toy" or "external".
        vehicles (int): Number of simulated vehicles.
        rsus (int): Number of simulated RSUs.
        epochs (int): Number of epochs executed.
        envelopes_accepted / envelopes_rejected (int): Request envelopes delivered to RSUs.
        replies_accepted / replies_rejected (int): Reply ciphertexts delivered to vehicles.
        beacons_accepted / beacons_rejected (int): Signed beacons delivered to RSUs.
        aggregates_accepted / aggregates_rejected (int): Aggregates delivered to the hub RSU.
        messages_dropped (int): Messages the adversary removed from the network.
        messages_tampered (int): Messages delivered with one flipped bit.
        messages_replayed (int): Replayed copies scheduled for delivery.
        forgeries_injected (int): Fabricated beacons sent by the adversary.
        trace_successes / trace_failures (int): Sampled KGC trace outcomes.
        adversary_successes (int): Adversary-originated messages that were accepted.
        invariant_violations (int): Failed end-of-run audits.
    """
    seed: int
    backend: str
    vehicles: int
    rsus: int
    epochs: int
    envelopes_accepted: int
    envelopes_rejected: int
    replies_accepted: int
    replies_rejected: int
    beacons_accepted: int
    beacons_rejected: int
    aggregates_accepted: int
    aggregates_rejected: int
    messages_dropped: int
    messages_tampered: int
    messages_replayed: int
    forgeries_injected: int
    trace_successes: int
    trace_failures: int
    adversary_successes: int
    invariant_violations: int


class ITimingRow(TypedDict):
    op: str
    count: int
    mean_ns: float
    p50_ns: float
    p99_ns: float


class IBenchRow(TypedDict):
    """A row of bench output; `n` is the number of beacons for the verify ops, else 1."""
    op: str
    n: int
    mean_ns: float
    p50_ns: float
    p99_ns: float
    ops_per_sec: float


class IEventRecord(TypedDict, total=False):
    """
    One line of events.jsonl.

    Attributes:
        seq (int): Position in the event log, starting at 0.
        epoch (int): Logical epoch of the event.
        event (str): deliver, accept, reject, drop, tamper, replay, forge,
            aggregate, trace, audit.
        actor (str): Actor id that handled or produced the event.
        kind (str): Message body kind when the event concerns a message.
        origin (str): honest, tampered, replayed or forged.
        digest (str): Short SHA-256 fingerprint of the message body.
        before (str): Digest before an adversarial mutation.
        after (str): Digest after an adversarial mutation.
        detail (str): Free-form reason, never private key material.
    """
    seq: int
    epoch: int
    event: str
    actor: str
    kind: str
    origin: str
    digest: str
    before: str
    after: str
    detail: str


class ITranscriptRecord(TypedDict):
    """
    One line of a security-game transcript.

    Attributes:
        query (str): h1, h2, h3, h5, signcrypt, designcrypt, extract, sign,
            trace, abort, challenge, guess or verdict.
        input_digest (str): Fingerprint of the query input.
        answer_digest (Optional[str]): Fingerprint of the answer, None for aborts.
        trapdoor (bool): Whether the simulator holds a trapdoor for the answer.
    """
    query: str
    input_digest: str
    answer_digest: Optional[str]
    trapdoor: bool
