"""
settings.py
============
Settings module for protocol constants, simulator defaults and output formats.
"""
import os

# Backends
DEFAULT_BACKEND = os.environ.get("VANET_BACKEND", "toy")
SUPPORTED_BACKENDS = ("toy", "external")

# Toy bilinear groups (transparent, insecure by construction)
TOY_MODULUS = 1009
TOY_SECURITY_LEVEL = 10

# External backend (BLS12-381 via py_ecc)
EXTERNAL_SECURITY_LEVEL = 128
EXTERNAL_HASH_DST = b"VANET-V01-CS01-with-BLS12381G1_XMD:SHA-256_SSWU_RO_"

# Bit lengths. l1 and l3 are not pinned by the protocol description.
DEFAULT_L1_BITS = 128
DEFAULT_L3_BITS = 128
NONCE_BYTES = 8
TIMESTAMP_BYTES = 8

# Hash domain separation tags, one per oracle
H1_TAG = 0x01
H2_TAG = 0x02
H3_TAG = 0x03
H5_TAG = 0x05

# KGC
KGC_IDENTITY = b"KGC-0"
TRACE_KEY_BYTES = 32
CHANNEL_KEY_BYTES = 32

# Ciphers
DEFAULT_CIPHER = "aes-gcm"
TOY_AEAD_TAG_BYTES = 8
TOY_AEAD_NONCE_BYTES = 8
AES_GCM_NONCE_BYTES = 12

# Retries for nonzero sampling
MAX_RESAMPLES = 8

# Scenario defaults
DEFAULT_VEHICLES = 2
DEFAULT_RSUS = 1
DEFAULT_EPOCHS = 1
DEFAULT_BEACON_RATE = 2
DEFAULT_STP_BATCH = 5
DEFAULT_FRESHNESS_WINDOW = 0
DEFAULT_AGGREGATE_CHUNK = 8
DEFAULT_TRACE_SAMPLE = 2
DEFAULT_REPLAY_DELAY = 1
DEFAULT_SEED = 0

# Safety threshold for accidental acceptances on the toy backend
TOY_ACCIDENTAL_ACCEPT_RATE = 1e-4

# Logging
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
LOG_FILE_MAX_MB = 10
LOG_FILE_BACKUPS = 3

# Output files
METRICS_CSV_NAME = "metrics.csv"
TIMINGS_CSV_NAME = "timings.csv"
EVENT_LOG_NAME = "events.jsonl"
PARAMS_FILE_NAME = "params.txt"
REGISTRATION_FILE_NAME = "registrations.tsv"
BENCH_CSV_NAME = "bench.csv"
DEFAULT_OUT_DIR = "out"

# CSV fields
METRICS_FIELDS = [
    "seed", "backend", "vehicles", "rsus", "epochs",
    "envelopes_accepted", "envelopes_rejected",
    "replies_accepted", "replies_rejected",
    "beacons_accepted", "beacons_rejected",
    "aggregates_accepted", "aggregates_rejected",
    "messages_dropped", "messages_tampered", "messages_replayed",
    "forgeries_injected", "trace_successes", "trace_failures",
    "adversary_successes", "invariant_violations"
]
TIMING_FIELDS = ["op", "count", "mean_ns", "p50_ns", "p99_ns"]
BENCH_FIELDS = ["op", "n", "mean_ns", "p50_ns", "p99_ns", "ops_per_sec"]

# Benchmarks
BENCH_OPS = ("signcrypt", "designcrypt", "sign", "verify_single", "verify_aggregate")
DEFAULT_BENCH_SIZES = [1, 10, 50, 100]
DEFAULT_BENCH_ITERS = 20
DEFAULT_BENCH_WORKERS = 1

# Security games
GAME_IDS = ("signcrypt_auth", "aggregate_auth")
DEFAULT_GAME_TRIALS = 100
RANDOM_GUESS_ATTEMPTS = 1000
RANDOM_GUESS_WIN_CEILING = 2
