"""
Symmetric AEAD for the Reply and Update phases.

The cipher is pluggable: `get_cipher(name)` returns an `Aead` implementation.

    aes-gcm   AES-256-GCM from `cryptography`, 12-byte random nonce prefixed
    toy-aead  keyed SHAKE-256 stream plus a 64-bit keyed BLAKE2b tag; cheap and
              deterministic under a seeded rng, with forgery probability 2^-64
"""
import abc
import hashlib
import hmac
import random
from typing import Dict, Type

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from src.errors import AuthenticationError
from src.utils.helpers import xor_bytes
from settings import AES_GCM_NONCE_BYTES, TOY_AEAD_NONCE_BYTES, TOY_AEAD_TAG_BYTES


class Aead(abc.ABC):
    """Authenticated encryption with associated data."""

    name: str

    @abc.abstractmethod
    def encrypt(self, key: bytes, plaintext: bytes, associated_data: bytes, rng: random.Random) -> bytes:
        raise NotImplementedError()

    @abc.abstractmethod
    def decrypt(self, key: bytes, ciphertext: bytes, associated_data: bytes) -> bytes:
        """Raises AuthenticationError when the ciphertext or associated data was altered."""
        raise NotImplementedError()


class AesGcmAead(Aead):
    name = "aes-gcm"

    def encrypt(self, key: bytes, plaintext: bytes, associated_data: bytes, rng: random.Random) -> bytes:
        nonce = rng.randbytes(AES_GCM_NONCE_BYTES)
        return nonce + AESGCM(key).encrypt(nonce, plaintext, associated_data)

    def decrypt(self, key: bytes, ciphertext: bytes, associated_data: bytes) -> bytes:
        if len(ciphertext) < AES_GCM_NONCE_BYTES + 16:
            raise AuthenticationError("Ciphertext is too short")
        nonce, body = ciphertext[:AES_GCM_NONCE_BYTES], ciphertext[AES_GCM_NONCE_BYTES:]
        try:
            return AESGCM(key).decrypt(nonce, body, associated_data)
        except InvalidTag as e:
            raise AuthenticationError("AES-GCM tag mismatch") from e


class ToyAead(Aead):
    name = "toy-aead"

    @staticmethod
    def _keystream(key: bytes, nonce: bytes, length: int) -> bytes:
        return hashlib.shake_256(b"stream" + key + nonce).digest(length)

    @staticmethod
    def _tag(key: bytes, nonce: bytes, body: bytes, associated_data: bytes) -> bytes:
        mac = hashlib.blake2b(key=key[:64], digest_size=TOY_AEAD_TAG_BYTES)
        mac.update(len(associated_data).to_bytes(8, "big") + associated_data + nonce + body)
        return mac.digest()

    def encrypt(self, key: bytes, plaintext: bytes, associated_data: bytes, rng: random.Random) -> bytes:
        nonce = rng.randbytes(TOY_AEAD_NONCE_BYTES)
        body = xor_bytes(plaintext, self._keystream(key, nonce, len(plaintext)))
        return nonce + body + self._tag(key, nonce, body, associated_data)

    def decrypt(self, key: bytes, ciphertext: bytes, associated_data: bytes) -> bytes:
        if len(ciphertext) < TOY_AEAD_NONCE_BYTES + TOY_AEAD_TAG_BYTES:
            raise AuthenticationError("Ciphertext is too short")
        nonce = ciphertext[:TOY_AEAD_NONCE_BYTES]
        body = ciphertext[TOY_AEAD_NONCE_BYTES:-TOY_AEAD_TAG_BYTES]
        tag = ciphertext[-TOY_AEAD_TAG_BYTES:]
        if not hmac.compare_digest(tag, self._tag(key, nonce, body, associated_data)):
            raise AuthenticationError("Toy AEAD tag mismatch")
        return xor_bytes(body, self._keystream(key, nonce, len(body)))


CIPHERS: Dict[str, Type[Aead]] = {cls.name: cls for cls in (AesGcmAead, ToyAead)}


def get_cipher(name: str) -> Aead:
    try:
        return CIPHERS[name]()
    except KeyError as e:
        raise ValueError(f"Unknown cipher {name!r}; choose from {sorted(CIPHERS)}") from e
