from abc import abstractmethod

import structlog

from app.core.exceptions import RoleConflictException, UnknownPackageException, UntrustedSignatureException
from app.models.package import PackageManifest, Role
from app.repositories.base_repository import BaseRepository

logger = structlog.get_logger(__name__)


class IPackageRepository(BaseRepository[str, PackageManifest]):
    """Abstract interface for the per-device package registry."""

    @abstractmethod
    def register(self, manifest: PackageManifest) -> PackageManifest:
        """Install or update a package."""
        pass

    @abstractmethod
    def get_manifest(self, package: str) -> PackageManifest:
        """Get a manifest or raise UnknownPackageException."""
        pass

    @abstractmethod
    def role_holder(self, role: Role) -> str | None:
        """Package currently holding a role, if any."""
        pass

    @abstractmethod
    def sandbox_packages(self) -> list[PackageManifest]:
        """Registered packages that live inside the sandbox."""
        pass


class PackageRepository(IPackageRepository):
    """In-memory package registry of one simulated device."""

    def key_of(self, entity: PackageManifest) -> str:
        return entity.package

    def register(self, manifest: PackageManifest) -> PackageManifest:
        """
        Install or update a package.

        Sandbox packages need a trusted platform signature, and each role is
        held by at most one package.

        :param manifest: Parsed manifest
        :return: Registered manifest
        :raises UntrustedSignatureException: If an in_pcc package is not platform signed
        :raises RoleConflictException: If another package already holds one of the roles
        """
        if manifest.in_pcc and not manifest.trusted_signature:
            raise UntrustedSignatureException(manifest.package)

        for role in sorted(manifest.roles, key=lambda r: r.value):
            holder = self.role_holder(role)
            if holder is not None and holder != manifest.package:
                raise RoleConflictException(role.value, holder, manifest.package)

        self.create(manifest)
        logger.debug("package_registered", package=manifest.package, in_pcc=manifest.in_pcc)
        return manifest

    def get_manifest(self, package: str) -> PackageManifest:
        manifest = self.get_by_id(package)
        if manifest is None:
            raise UnknownPackageException(package)
        return manifest

    def role_holder(self, role: Role) -> str | None:
        for manifest in self._items.values():
            if role in manifest.roles:
                return manifest.package
        return None

    def sandbox_packages(self) -> list[PackageManifest]:
        return [m for m in self._items.values() if m.in_pcc]
