from .base import (
    ParseError,
    SourceDocument,
    ValidationIssue,
    read_document,
)
from .cm_bulletin import parse_cm_bulletin
from .nvd import parse_nvd_record
from .aosp import parse_aosp_bulletin
from .oem_changelog import parse_oem_changelog
from .device_catalog import parse_device_catalog
from .chipset_dates import parse_chipset_release_dates

__all__ = [
    "ParseError",
    "SourceDocument",
    "ValidationIssue",
    "read_document",
    "parse_cm_bulletin",
    "parse_nvd_record",
    "parse_aosp_bulletin",
    "parse_oem_changelog",
    "parse_device_catalog",
    "parse_chipset_release_dates",
]
