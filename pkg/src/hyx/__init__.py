"""hyx: a content-addressed hypertext engine.

Documents are addressed by the digest of their bytes, content locators
select segments of them, and edit lists assemble new documents by
transclusion while exposing the links they imply.
"""

__version__ = "0.1.0"
