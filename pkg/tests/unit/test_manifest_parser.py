"""
Unit tests for manifest parsing and the package registry.
"""

import json

import pytest

from app.core.exceptions import (
    ManifestValidationException,
    RoleConflictException,
    UnknownPackageException,
    UntrustedSignatureException,
)
from app.models.package import PermissionKind, Role
from app.repositories.package_repository import PackageRepository
from app.services.policy.manifest_parser import manifest_from_dict, parse_manifest
from tests.fixtures import ManifestFactory


@pytest.mark.unit
class TestParseManifest:
    """Tests for parse_manifest / manifest_from_dict."""

    def test_shipped_asi_manifest(self, data_dir):
        """Shipped sandbox manifest: 54 permissions, six roles, no INTERNET."""
        # Act
        manifest = parse_manifest((data_dir / "manifests" / "asi_manifest.json").read_text())

        # Assert
        assert manifest.package == "com.google.android.as"
        assert len(manifest.permissions) == 54
        assert manifest.roles == frozenset(Role)
        assert manifest.in_pcc is True
        assert manifest.holds_internet is False

    def test_absent_fields_default(self):
        # Act
        manifest = manifest_from_dict({"package": "com.example.app"})

        # Assert
        assert manifest.permissions == frozenset()
        assert manifest.roles == frozenset()
        assert manifest.in_pcc is False
        assert manifest.trusted_signature is False

    def test_permission_kinds_classified(self):
        # Act
        manifest = manifest_from_dict(
            {
                "package": "com.example.app",
                "permissions": [
                    "android.permission.INTERNET",
                    "android.permission.CAMERA",
                    "android.permission.MANAGE_USERS",
                ],
            }
        )

        # Assert
        kinds = {p.name: p.kind for p in manifest.permissions}
        assert kinds["android.permission.INTERNET"] == PermissionKind.INSTALL
        assert kinds["android.permission.CAMERA"] == PermissionKind.RUNTIME
        assert kinds["android.permission.MANAGE_USERS"] == PermissionKind.SIGNATURE

    def test_repeated_roles_collapse(self):
        # Act
        manifest = manifest_from_dict(
            {"package": "com.example.app", "roles": ["SYSTEM_UI_INTELLIGENCE", "SYSTEM_UI_INTELLIGENCE"]}
        )

        # Assert
        assert manifest.roles == frozenset({Role.SYSTEM_UI_INTELLIGENCE})

    def test_duplicate_permission_rejected(self):
        # Act & Assert
        with pytest.raises(ManifestValidationException) as exc_info:
            manifest_from_dict(
                {"package": "com.example.app", "permissions": ["android.permission.CAMERA"] * 2}
            )
        assert "duplicate" in exc_info.value.message

    def test_unknown_role_rejected(self):
        # Act & Assert
        with pytest.raises(ManifestValidationException) as exc_info:
            manifest_from_dict({"package": "com.example.app", "roles": ["SYSTEM_MAGIC_INTELLIGENCE"]})
        assert "SYSTEM_MAGIC_INTELLIGENCE" in exc_info.value.message

    def test_unknown_field_rejected(self):
        # Act & Assert
        with pytest.raises(ManifestValidationException) as exc_info:
            manifest_from_dict({"package": "com.example.app", "sdk": 33})
        assert exc_info.value.message.startswith("/sdk")

    def test_invalid_package_id_rejected(self):
        # Act & Assert
        with pytest.raises(ManifestValidationException):
            manifest_from_dict({"package": "Example"})

    def test_invalid_json_rejected(self):
        # Act & Assert
        with pytest.raises(ManifestValidationException) as exc_info:
            parse_manifest('{"package": ')
        assert exc_info.value.error_code == "MANIFEST_INVALID"

    def test_text_and_dict_agree(self):
        # Arrange
        document = {"package": "com.example.app", "permissions": ["android.permission.INTERNET"]}

        # Act & Assert
        assert parse_manifest(json.dumps(document)) == manifest_from_dict(document)


@pytest.mark.unit
class TestPackageRepository:
    """Tests for PackageRepository."""

    def test_register_and_get(self, asi_manifest):
        # Arrange
        repo = PackageRepository()

        # Act
        repo.register(asi_manifest)

        # Assert
        assert repo.get_manifest("com.google.android.as") == asi_manifest
        assert repo.sandbox_packages() == [asi_manifest]

    def test_unknown_package_raises(self):
        # Act & Assert
        with pytest.raises(UnknownPackageException):
            PackageRepository().get_manifest("com.example.ghost")

    def test_sandbox_package_needs_trusted_signature(self):
        # Arrange
        unsigned = ManifestFactory.build(in_pcc=True, trusted_signature=False)

        # Act & Assert
        with pytest.raises(UntrustedSignatureException):
            PackageRepository().register(unsigned)

    def test_role_held_by_one_package_only(self, asi_manifest):
        # Arrange
        repo = PackageRepository()
        repo.register(asi_manifest)
        rival = ManifestFactory.build(roles=frozenset({Role.SYSTEM_TEXT_INTELLIGENCE}))

        # Act & Assert
        with pytest.raises(RoleConflictException):
            repo.register(rival)

    def test_update_replaces_manifest(self, asi_manifest):
        """Re-registering the role holder itself is an update, not a conflict."""
        # Arrange
        repo = PackageRepository()
        repo.register(asi_manifest)

        # Act
        repo.register(asi_manifest.with_permission("android.permission.INTERNET"))

        # Assert
        assert repo.count() == 1
        assert repo.get_manifest(asi_manifest.package).holds_internet
