# Time conversion constants
MILLIS_PER_MINUTE = 60_000

# Ephemeral store
DEFAULT_TTL_MS = 900_000  # 15 simulated minutes

# Isolated processes
DEFAULT_PROCESS_LIFETIME_MS = 600_000

# Framework API proxy
DEFAULT_FRAMEWORK_API_RATE_LIMIT = 100  # calls per package per simulated minute

# Crypto
DEFAULT_FIELD_PRIME = 2**61 - 1
DEFAULT_SECAGG_MODULUS = 2**32
MAX_SECAGG_MODULUS = 2**32  # vectors are carried as uint32 on the wire
SEED_LENGTH = 32
WIRE_VERSION = 1

# Gateway
DEFAULT_K_ANONYMITY = 100

# Features
DEFAULT_KEYSTROKE_FREEZE_THRESHOLD = 3
DEFAULT_ATTENTION_WINDOW_MS = 2000

# PIR
PIR_LENGTH_PREFIX_BYTES = 4

# Well-known packages
ASI_PACKAGE = "com.google.android.as"
PCS_PACKAGE = "com.google.android.as.oss"
SYSTEM_UI_PACKAGE = "com.android.systemui"
CONTACTS_PROVIDER_PACKAGE = "com.android.providers.contacts"

# Origin packages recorded for ambient framework sources
MEDIA_ORIGIN = "android.media"
CAMERA_ORIGIN = "android.hardware.camera"
LOCATION_ORIGIN = "android.location"

# Association partners CDD 9.8.6 tolerates, grouped by category
DEFAULT_PARTNER_PACKAGES: dict[str, frozenset[str]] = {
    "telephony": frozenset({"com.android.providers.telephony", "com.android.bluetooth"}),
    "contacts": frozenset({"com.android.providers.contacts"}),
    "system_ui": frozenset({SYSTEM_UI_PACKAGE}),
    "media": frozenset({"com.android.providers.media", "com.google.android.providers.media.module"}),
    "pcs": frozenset({PCS_PACKAGE}),
}

# CDD rule identifiers
CDD_RULE_INTERNET = "9.8.6-internet"
CDD_RULE_EGRESS = "9.8.6-egress"
CDD_RULE_ASSOCIATION = "9.8.6-association"

INTERNET_PERMISSION = "android.permission.INTERNET"

# Permission classification
RUNTIME_PERMISSIONS = frozenset(
    {
        "android.permission.ACCESS_BACKGROUND_LOCATION",
        "android.permission.ACCESS_COARSE_LOCATION",
        "android.permission.ACCESS_FINE_LOCATION",
        "android.permission.BLUETOOTH_CONNECT",
        "android.permission.BLUETOOTH_SCAN",
        "android.permission.CAMERA",
        "android.permission.READ_CALL_LOG",
        "android.permission.READ_CONTACTS",
        "android.permission.READ_EXTERNAL_STORAGE",
        "android.permission.READ_PHONE_STATE",
        "android.permission.READ_SMS",
        "android.permission.RECORD_AUDIO",
    }
)
INSTALL_PERMISSIONS = frozenset(
    {
        INTERNET_PERMISSION,
        "android.permission.ACCESS_NETWORK_STATE",
        "android.permission.ACCESS_WIFI_STATE",
        "android.permission.BLUETOOTH_ADMIN",
        "android.permission.FOREGROUND_SERVICE",
        "android.permission.MODIFY_AUDIO_SETTINGS",
        "android.permission.RECEIVE_BOOT_COMPLETED",
        "android.permission.VIBRATE",
        "android.permission.WAKE_LOCK",
        "com.android.alarm.permission.SET_ALARM",
    }
)

# Report / JSON Lines
AUDIT_FIELD_ORDER = (
    "t",
    "kind",
    "src",
    "dst",
    "decision",
    "reason",
    "channel",
    "category",
    "bytes_out",
    "bytes_in",
    "feature",
    "user_action",
    "device",
)
