from src.games.extractors import (
    ForgeryPair,
    extract_cdh_from_aggregate_forgery,
    extract_cdh_from_signcryption_forgeries,
)
from src.games.forgery_game import (
    AggregateChallenger,
    GameId,
    GameResult,
    SigncryptionChallenger,
    Verdict,
    game_setup,
    run_forgery_game,
)
from src.games.forking import CooperativeForger, fork_signcryption_forger
from src.games.oracle_table import OracleEntry, OracleId, OracleTable, QueryLedger, program_oracle
from src.games.simulators import (
    BdhConfidentialitySimulator,
    CdhAggregateSimulator,
    CdhSigncryptionSimulator,
    simulate_sign_without_key,
    simulate_signcrypt_without_key,
)
from src.games.suites import PropertyResult, run_suite

__all__ = [
    "AggregateChallenger",
    "BdhConfidentialitySimulator",
    "CdhAggregateSimulator",
    "CdhSigncryptionSimulator",
    "CooperativeForger",
    "ForgeryPair",
    "GameId",
    "GameResult",
    "OracleEntry",
    "OracleId",
    "OracleTable",
    "PropertyResult",
    "QueryLedger",
    "SigncryptionChallenger",
    "Verdict",
    "extract_cdh_from_aggregate_forgery",
    "extract_cdh_from_signcryption_forgeries",
    "fork_signcryption_forger",
    "game_setup",
    "program_oracle",
    "run_forgery_game",
    "run_suite",
    "simulate_sign_without_key",
    "simulate_signcrypt_without_key",
]
