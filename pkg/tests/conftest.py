import logging

import pytest

from hyx.core import Document, HashAlgorithm
from hyx.store import ObjectStore

D1 = b"My name is Alice"
D3 = b"Hello, !"
C1 = b"char=11,15"
C1_FIXED = b"char=11,16"
C2 = b"char=7"

D1_SHA1 = "fcb59267e2e6641140578235c8cb6d38eaf6abc1"
D3_SHA1 = "995f37f2e066b7d8893873ca4d780da5bf017184"
C1_SHA1 = "c5b794c7ae5d490f52a414d9d19311b9a19f61b3"
C2_SHA1 = "48ba94c47b45390b6dd27824cfc0d8468c2cbc71"

E1 = f"take {D3_SHA1}\ninsert at {C2_SHA1}\nfrom {D1_SHA1}\nsegment {C1_SHA1}\n"


@pytest.fixture
def sha1_store(tmp_path):
    """SHA-1 store holding the documents and locators of the worked example."""
    store = ObjectStore.open(tmp_path / "store", create=True, algorithm=HashAlgorithm.SHA1)
    for data in (D1, D3, C1, C1_FIXED, C2):
        store.put(Document(data))
    return store


@pytest.fixture
def hyx_caplog(caplog):
    """caplog for hyx loggers, which do not propagate to the root logger by default."""
    names = [name for name in list(logging.Logger.manager.loggerDict) if name.startswith("hyx.")]
    previous = [(logging.getLogger(name), logging.getLogger(name).propagate) for name in names]
    for name in names:
        logging.getLogger(name).propagate = True
        caplog.set_level(logging.DEBUG, logger=name)
    yield caplog
    for logger, propagate in previous:
        logger.propagate = propagate
