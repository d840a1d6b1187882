from collections import Counter

import structlog

from app.core.exceptions import PirIndexException
from app.interfaces.homomorphic_scheme import IHomomorphicScheme
from app.services.pir.client import PirQuery, PirResponse
from app.services.pir.database import PirDatabase

logger = structlog.get_logger(__name__)


class PirServer:
    """
    Linear single-server PIR.

    For each limb position the response is the homomorphic inner product of
    the query with that limb column. Every query costs exactly n scalar
    multiplications and n - 1 additions per limb whatever the selected index,
    and the server never decrypts.
    """

    def __init__(self, database: PirDatabase, scheme: IHomomorphicScheme):
        self.database = database
        self.scheme = scheme
        self.last_trace: Counter[str] = Counter()
        self.queries_answered = 0

    def answer(self, query: PirQuery) -> PirResponse:
        """
        :param query: Encrypted selection vector of length n
        :return: One ciphertext per limb
        :raises PirIndexException: If the query length does not match the database
        """
        size = self.database.size
        if len(query.ciphertexts) != size:
            raise PirIndexException(f"query has {len(query.ciphertexts)} entries, database has {size}")

        trace: Counter[str] = Counter()
        pk = query.public_key
        out: list[bytes] = []
        for position in range(self.database.limb_count):
            acc = self.scheme.scalar_mul(pk, query.ciphertexts[0], self.database.limb(0, position))
            trace["scalar_mul"] += 1
            for j in range(1, size):
                term = self.scheme.scalar_mul(pk, query.ciphertexts[j], self.database.limb(j, position))
                acc = self.scheme.add(pk, acc, term)
                trace["scalar_mul"] += 1
                trace["add"] += 1
            out.append(acc)

        self.last_trace = trace
        self.queries_answered += 1
        logger.debug("pir_query_answered", records=size, limbs=len(out))
        return PirResponse(ciphertexts=tuple(out))


def answer(query: PirQuery, database: PirDatabase, scheme: IHomomorphicScheme) -> PirResponse:
    return PirServer(database, scheme).answer(query)
