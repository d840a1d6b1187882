"""
Data taxonomy: category, class and source of everything entering the sandbox.

The (class, source) pairs are exactly the rows of the platform's data-source
table; any other pair is rejected at construction.
"""

import enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.validators import PackageId


class DataCategory(str, enum.Enum):
    RAW = "Raw"
    DERIVED = "Derived"
    METADATA = "Metadata"


class DataClass(str, enum.Enum):
    AUDIO = "Audio"
    IMAGE = "Image"
    TEXT = "Text"
    STRUCTURED = "Structured"
    LOCATION = "Location"


class DataSource(str, enum.Enum):
    FRAMEWORK_AUDIO = "FrameworkAudio"
    SCREENSHOT = "Screenshot"
    SCREEN_CAPTURE = "ScreenCapture"
    NOTIFICATION_CONTENT = "NotificationContent"
    APP_SEARCH_INDEXED = "AppSearchIndexed"
    APP_PUSHED = "AppPushed"
    CONTACTS = "Contacts"
    APP_LAUNCHES = "AppLaunches"
    SHORTCUTS = "Shortcuts"
    MICROPHONE = "Microphone"
    CAMERA = "Camera"
    LOCATION_PROVIDER = "LocationProvider"


class DataOrigin(str, enum.Enum):
    OS_LEVEL = "OS-level"
    AMBIENT = "ambient"


# source -> (class, origin, access method)
DATA_SOURCE_TABLE: dict[DataSource, tuple[DataClass, DataOrigin, str]] = {
    DataSource.FRAMEWORK_AUDIO: (DataClass.AUDIO, DataOrigin.OS_LEVEL, "audio APIs"),
    DataSource.SCREENSHOT: (DataClass.IMAGE, DataOrigin.OS_LEVEL, "Content Suggestions API"),
    DataSource.SCREEN_CAPTURE: (DataClass.TEXT, DataOrigin.OS_LEVEL, "Content Capture API"),
    DataSource.NOTIFICATION_CONTENT: (DataClass.TEXT, DataOrigin.OS_LEVEL, "NLS and NAS"),
    DataSource.APP_SEARCH_INDEXED: (DataClass.STRUCTURED, DataOrigin.OS_LEVEL, "AppSearch API"),
    DataSource.APP_PUSHED: (DataClass.STRUCTURED, DataOrigin.OS_LEVEL, "Content Capture API"),
    DataSource.CONTACTS: (DataClass.STRUCTURED, DataOrigin.OS_LEVEL, "Contacts API"),
    DataSource.APP_LAUNCHES: (DataClass.STRUCTURED, DataOrigin.OS_LEVEL, "UsageStatsManager"),
    DataSource.SHORTCUTS: (DataClass.STRUCTURED, DataOrigin.OS_LEVEL, "ShortcutManager"),
    DataSource.MICROPHONE: (DataClass.AUDIO, DataOrigin.AMBIENT, "audio APIs"),
    DataSource.CAMERA: (DataClass.IMAGE, DataOrigin.AMBIENT, "camera APIs"),
    DataSource.LOCATION_PROVIDER: (DataClass.LOCATION, DataOrigin.AMBIENT, "Location Provider"),
}

DATA_SOURCE_PAIRS: frozenset[tuple[DataClass, DataSource]] = frozenset(
    (data_class, source) for source, (data_class, _, _) in DATA_SOURCE_TABLE.items()
)

# Sources whose records carry a locus id
LOCUS_SOURCES = frozenset({DataSource.SCREEN_CAPTURE, DataSource.APP_PUSHED})


class DataDescriptor(BaseModel):
    """Category, class, source and originating package of a datum."""

    category: DataCategory
    data_class: DataClass = Field(alias="class")
    source: DataSource
    origin_package: PackageId

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @model_validator(mode="after")
    def _check_source_row(self) -> "DataDescriptor":
        if (self.data_class, self.source) not in DATA_SOURCE_PAIRS:
            raise ValueError(f"({self.data_class.value}, {self.source.value}) is not a known data source row")
        return self

    @classmethod
    def for_source(cls, category: DataCategory, source: DataSource, origin_package: str) -> "DataDescriptor":
        """Build a descriptor whose class is implied by the source row."""
        data_class = DATA_SOURCE_TABLE[source][0]
        return cls(category=category, data_class=data_class, source=source, origin_package=origin_package)

    @property
    def origin(self) -> DataOrigin:
        return DATA_SOURCE_TABLE[self.source][1]

    def as_derived(self) -> "DataDescriptor":
        return self.model_copy(update={"category": DataCategory.DERIVED})
