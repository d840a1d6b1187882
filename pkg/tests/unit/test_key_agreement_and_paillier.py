"""
Unit tests for the pluggable key agreements and the Paillier scheme.
"""

import random

import pytest

from app.core.exceptions import MalformedKeyException
from app.implementations import DealerKeyAgreement, PaillierScheme, X25519KeyAgreement

MASTER = bytes(range(32))


@pytest.fixture(params=["x25519", "dealer"])
def agreement(request):
    """Both agreements satisfy the same contract."""
    if request.param == "x25519":
        return X25519KeyAgreement()
    return DealerKeyAgreement(MASTER)


@pytest.fixture(scope="module")
def paillier():
    """Scheme plus a keypair; 256-bit keys keep the suite fast."""
    scheme = PaillierScheme(256)
    public_key, secret_key = scheme.keygen(random.Random(7))
    return scheme, public_key, secret_key


@pytest.mark.unit
class TestKeyAgreement:
    def test_symmetric(self, agreement):
        # Arrange
        a_private, a_public = agreement.keygen(bytes([1]) * 32)
        b_private, b_public = agreement.keygen(bytes([2]) * 32)

        # Act
        ab = agreement.agree(a_private, b_public)
        ba = agreement.agree(b_private, a_public)

        # Assert
        assert ab == ba
        assert len(ab) == 32

    def test_deterministic_keygen(self, agreement):
        assert agreement.keygen(bytes([3]) * 32) == agreement.keygen(bytes([3]) * 32)

    def test_distinct_pairs_distinct_seeds(self, agreement):
        # Arrange
        keys = [agreement.keygen(bytes([i]) * 32) for i in (1, 2, 3)]

        # Act
        ab = agreement.agree(keys[0][0], keys[1][1])
        ac = agreement.agree(keys[0][0], keys[2][1])

        # Assert
        assert ab != ac

    def test_malformed_peer_key(self, agreement):
        # Arrange
        private, _ = agreement.keygen(bytes([1]) * 32)

        # Act & Assert
        with pytest.raises(MalformedKeyException):
            agreement.agree(private, b"short")


@pytest.mark.unit
class TestDealerKeyAgreement:
    def test_master_must_be_32_bytes(self):
        with pytest.raises(MalformedKeyException):
            DealerKeyAgreement(b"too short")

    def test_public_key_is_identity(self):
        # Act
        _, public = DealerKeyAgreement(MASTER).keygen(bytes(range(100, 132)))

        # Assert
        assert public == bytes(range(100, 116))


@pytest.mark.unit
class TestPaillier:
    def test_decrypts_what_it_encrypts(self, paillier):
        # Arrange
        scheme, public_key, secret_key = paillier

        # Act
        ciphertext = scheme.encrypt(public_key, 2**32 - 1, random.Random(1))

        # Assert
        assert scheme.decrypt(secret_key, ciphertext) == 2**32 - 1

    def test_probabilistic(self, paillier):
        # Arrange
        scheme, public_key, _ = paillier

        # Act
        first = scheme.encrypt(public_key, 5, random.Random(1))
        second = scheme.encrypt(public_key, 5, random.Random(2))

        # Assert
        assert first != second

    def test_homomorphic_add_and_scalar(self, paillier):
        # Arrange
        scheme, public_key, secret_key = paillier
        rng = random.Random(3)
        a = scheme.encrypt(public_key, 1200, rng)
        b = scheme.encrypt(public_key, 34, rng)

        # Act
        combined = scheme.add(public_key, scheme.scalar_mul(public_key, a, 3), b)

        # Assert
        assert scheme.decrypt(secret_key, combined) == 3634

    def test_fixed_ciphertext_width(self, paillier):
        # Arrange
        scheme, public_key, _ = paillier
        rng = random.Random(4)

        # Act
        sizes = {len(scheme.encrypt(public_key, value, rng)) for value in (0, 1, 2**31)}

        # Assert
        assert sizes == {scheme.ciphertext_size(public_key)}

    def test_plaintext_modulus_is_key_size(self, paillier):
        # Arrange
        scheme, public_key, _ = paillier

        # Act & Assert
        assert scheme.plaintext_modulus(public_key).bit_length() == 256

    def test_keys_reproducible_per_seed(self):
        # Arrange
        scheme = PaillierScheme(64)

        # Act & Assert
        assert scheme.keygen(random.Random(9)) == scheme.keygen(random.Random(9))

    def test_small_keys_rejected(self):
        with pytest.raises(ValueError):
            PaillierScheme(32)

    def test_garbage_public_key(self, paillier):
        # Arrange
        scheme, _, _ = paillier

        # Act & Assert
        with pytest.raises(MalformedKeyException):
            scheme.encrypt(b"\x01garbage", 1, random.Random(0))

    def test_malformed_secret_key(self, paillier):
        # Arrange
        scheme, public_key, secret_key = paillier
        ciphertext = scheme.encrypt(public_key, 1, random.Random(0))

        # Act & Assert
        with pytest.raises(MalformedKeyException):
            scheme.decrypt(public_key, ciphertext)


@pytest.mark.unit
@pytest.mark.slow
class TestPaillierProperties:
    def test_encryption_is_probabilistic(self, paillier):
        # Arrange
        scheme, public_key, _ = paillier
        rng = random.Random(11)

        # Act
        ciphertexts = {scheme.encrypt(public_key, 42, rng) for _ in range(1000)}

        # Assert
        assert len(ciphertexts) >= 999

    def test_homomorphism_over_random_triples(self, paillier):
        """dec(scalar_mul(enc(a), k) + enc(b)) == k*a + b mod n."""
        # Arrange
        scheme, public_key, secret_key = paillier
        n = scheme.plaintext_modulus(public_key)
        rng = random.Random(12)

        for _ in range(100):
            a, b, k = rng.randrange(n), rng.randrange(n), rng.randrange(n)

            # Act
            combined = scheme.add(
                public_key,
                scheme.scalar_mul(public_key, scheme.encrypt(public_key, a, rng), k),
                scheme.encrypt(public_key, b, rng),
            )

            # Assert
            assert scheme.decrypt(secret_key, combined) == (k * a + b) % n


@pytest.mark.unit
@pytest.mark.slow
class TestKeyAgreementProperties:
    def test_symmetric_over_many_pairs(self, agreement):
        # Arrange
        rng = random.Random(13)

        for _ in range(100):
            a_private, a_public = agreement.keygen(rng.randbytes(32))
            b_private, b_public = agreement.keygen(rng.randbytes(32))

            # Act & Assert
            assert agreement.agree(a_private, b_public) == agreement.agree(b_private, a_public)

    def test_no_collisions(self, agreement):
        # Arrange
        rng = random.Random(14)
        keys = [agreement.keygen(rng.randbytes(32)) for _ in range(1001)]

        # Act
        agreed = {agreement.agree(keys[i][0], keys[i + 1][1]) for i in range(1000)}

        # Assert
        assert len(agreed) == 1000
