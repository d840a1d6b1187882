import hashlib
import json
from pathlib import Path
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict

from app.core.constants import (
    DEFAULT_ATTENTION_WINDOW_MS,
    DEFAULT_FIELD_PRIME,
    DEFAULT_FRAMEWORK_API_RATE_LIMIT,
    DEFAULT_K_ANONYMITY,
    DEFAULT_KEYSTROKE_FREEZE_THRESHOLD,
    DEFAULT_PROCESS_LIFETIME_MS,
    DEFAULT_SECAGG_MODULUS,
    DEFAULT_TTL_MS,
    MILLIS_PER_MINUTE,
    PCS_PACKAGE,
)


class Settings(BaseSettings):
    """Simulator settings"""

    app_name: str = "PCC Simulator"
    tool_version: str = "1.0.0"
    debug: bool = False
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    # Shipped manifests, association configs, policies and scenarios
    data_dir: Path = Path(__file__).resolve().parents[2] / "data"

    # Sandbox runtime
    default_ttl_ms: int = DEFAULT_TTL_MS
    framework_api_rate_limit: int = DEFAULT_FRAMEWORK_API_RATE_LIMIT
    rate_limit_window_ms: int = MILLIS_PER_MINUTE
    process_lifetime_ms: int = DEFAULT_PROCESS_LIFETIME_MS

    # Crypto
    field_prime: int = DEFAULT_FIELD_PRIME
    he_key_bits: int = 1024  # desk scale, not a production size
    key_agreement: Literal["x25519", "dealer"] = "x25519"

    # Secure aggregation
    secagg_modulus: int = DEFAULT_SECAGG_MODULUS
    secagg_threshold_ratio: float = 0.7

    # PIR
    pir_record_size: int = 64
    pir_limb_size: int = 2

    # Gateway
    pcs_package: str = PCS_PACKAGE
    default_k: int = DEFAULT_K_ANONYMITY
    download_max_attempts: int = 3

    # Features
    keystroke_freeze_threshold: int = DEFAULT_KEYSTROKE_FREEZE_THRESHOLD
    attention_window_ms: int = DEFAULT_ATTENTION_WINDOW_MS

    # Fleet
    max_devices: int = 64

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", case_sensitive=False, extra="ignore")

    @property
    def config_hash(self) -> str:
        """SHA-256 over the settings that influence simulation results."""
        relevant = self.model_dump(mode="json", exclude={"app_name", "debug", "log_level", "data_dir"})
        canonical = json.dumps(relevant, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


settings = Settings()
