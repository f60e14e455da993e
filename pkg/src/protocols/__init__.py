from src.protocols.aggregate import (
    AggregateSignature,
    CommonString,
    CommonStringLedger,
    ShortTermCredential,
    SignedBeacon,
    aggregate,
    extract_short_term_key,
    re_aggregate,
    sign_beacon,
    verify_aggregate,
    verify_single,
)
from src.protocols.pseudonyms import KgcState, PseudonymKind, Validity, trace, unwrap_reply, wrap_reply
from src.protocols.signcryption import (
    InnerSignature,
    LongTermCredential,
    MasterSecret,
    RequestPlaintext,
    RsuCredential,
    SigncryptedEnvelope,
    SystemParams,
    designcrypt,
    extract_rsu_key,
    extract_vehicle_key,
    setup,
    signcrypt,
    verify_inner,
)
