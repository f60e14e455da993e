"""
Protocol Benchmarks
===================

Times one protocol operation over a number of iterations and summarizes the
samples with pandas. Iterations are independent, so they may be spread over
worker threads; each worker draws from its own rng stream derived from the
seed, which keeps the fixtures (keys, messages, nonces) reproducible.

On the toy backend the numbers measure protocol-logic overhead only: a toy
pairing is one modular multiplication.
"""
import concurrent.futures
import logging
import random
import time
from typing import Callable, List, Sequence

from src.models.records import IBenchRow
from src.pairing import BackendId
from src.protocols.aggregate import (
    CommonString,
    aggregate,
    extract_short_term_key,
    sign_beacon,
    verify_aggregate,
    verify_single,
)
from src.protocols.signcryption import (
    RequestPlaintext,
    designcrypt,
    extract_rsu_key,
    extract_vehicle_key,
    setup,
    signcrypt,
)
from src.utils.decorators import describe_ns
from settings import BENCH_OPS, EXTERNAL_SECURITY_LEVEL, TOY_SECURITY_LEVEL

# Operations whose cost grows with the number of beacons.
SIZED_OPS = ("verify_single", "verify_aggregate")


class ProtocolBenchmark:
    """
    Class for timing the protocol operations on one backend.

    `run(op, sizes)` returns one IBenchRow per size; `n` is the number of
    beacons for verify_single (n single verifications) and verify_aggregate
    (one aggregate of n beacons), and 1 for every other operation.
    """
    def __init__(self, backend: str, seed: int, iters: int, workers: int = 1):
        if iters <= 0:
            raise ValueError(f"iters must be positive, got {iters}")
        if workers <= 0:
            raise ValueError(f"workers must be positive, got {workers}")
        self.backend = backend
        self.seed = seed
        self.iters = iters
        self.workers = workers
        security = TOY_SECURITY_LEVEL if backend == BackendId.TOY.value else EXTERNAL_SECURITY_LEVEL
        self.params, self.master = setup(security, backend, rng=random.Random(f"bench:{seed}"))
        self.rsu = extract_rsu_key(self.params, self.master, b"RSU-BENCH")

    def _beacons(self, rng: random.Random, n: int, cs: CommonString):
        beacons = []
        for i in range(n):
            stp = rng.randbytes(self.params.pseudonym_bytes)
            cred = extract_short_term_key(self.params, self.master, stp)
            beacons.append(sign_beacon(self.params, cred, f"beacon-{i}".encode(), cs, rng))
        return beacons

    def _fixture(self, op: str, n: int, rng: random.Random) -> Callable[[], object]:
        """Build the inputs outside the timed region; return the call to time."""
        params = self.params
        ltp = rng.randbytes(params.pseudonym_bytes)
        vehicle = extract_vehicle_key(params, self.master, ltp)
        m = RequestPlaintext(rng.getrandbits(64), ltp, rng.getrandbits(32))
        cs = CommonString(rng.randbytes(32), 0)

        if op == "signcrypt":
            return lambda: signcrypt(params, vehicle, m, self.rsu.id_r, rng)
        if op == "designcrypt":
            envelope = signcrypt(params, vehicle, m, self.rsu.id_r, rng)
            return lambda: designcrypt(params, self.rsu, envelope)
        if op == "sign":
            stp = rng.randbytes(params.pseudonym_bytes)
            cred = extract_short_term_key(params, self.master, stp)
            return lambda: sign_beacon(params, cred, rng.randbytes(16), cs, rng)
        if op == "verify_single":
            beacons = self._beacons(rng, n, cs)
            return lambda: all(verify_single(params, b, cs) for b in beacons)
        if op == "verify_aggregate":
            agg = aggregate(params, self._beacons(rng, n, cs))
            return lambda: verify_aggregate(params, agg, cs)
        raise ValueError(f"Unknown benchmark op {op!r}; expected one of {BENCH_OPS}")

    def _run_worker(self, op: str, n: int, worker: int) -> List[int]:
        rng = random.Random(f"bench:{self.seed}:{op}:{n}:{worker}")
        share = len(range(worker, self.iters, self.workers))
        call = self._fixture(op, n, rng)
        samples = []
        for _ in range(share):
            start = time.perf_counter_ns()
            call()
            samples.append(time.perf_counter_ns() - start)
        return samples

    def _collect(self, op: str, n: int) -> List[int]:
        if self.workers == 1:
            return self._run_worker(op, n, 0)

        samples: List[int] = []
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.workers) as executor:
            future_to_worker = {
                executor.submit(self._run_worker, op, n, worker): worker
                for worker in range(self.workers)
            }
            results = {}
            for future in concurrent.futures.as_completed(future_to_worker):
                results[future_to_worker[future]] = future.result()
        # Worker order, not completion order
        for worker in sorted(results):
            samples.extend(results[worker])
        return samples

    def run(self, op: str, sizes: Sequence[int]) -> List[IBenchRow]:
        if op not in BENCH_OPS:
            raise ValueError(f"Unknown benchmark op {op!r}; expected one of {BENCH_OPS}")
        if any(n <= 0 for n in sizes):
            raise ValueError(f"Sizes must be positive, got {list(sizes)}")
        if op not in SIZED_OPS:
            sizes = [1]

        rows: List[IBenchRow] = []
        for n in sizes:
            samples = self._collect(op, n)
            mean, p50, p99 = describe_ns(samples)
            rows.append({
                "op": op,
                "n": n,
                "mean_ns": mean,
                "p50_ns": p50,
                "p99_ns": p99,
                "ops_per_sec": 1e9 / mean if mean else 0.0,
            })
            logging.info(
                "%s n=%d: mean %.0f ns, p99 %.0f ns over %d iterations (%s backend)",
                op, n, mean, p99, len(samples), self.backend
            )
        return rows
