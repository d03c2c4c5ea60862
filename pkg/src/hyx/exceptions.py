class HyxError(Exception):
    pass


class InvalidDocumentError(HyxError, ValueError):
    pass


# identifiers


class IdentifierError(HyxError, ValueError):
    pass


class MalformedIdError(IdentifierError):
    pass


class UnknownAlgorithmError(IdentifierError):
    pass


class DigestLengthError(IdentifierError):
    pass


# locators


class LocatorSyntaxError(HyxError, ValueError):
    pass


class EmptyLocatorError(LocatorSyntaxError):
    pass


class UnknownSchemeError(LocatorSyntaxError):
    pass


class InvalidPositionError(LocatorSyntaxError):
    pass


class InvertedRangeError(LocatorSyntaxError):
    pass


class MalformedLocatorError(LocatorSyntaxError):
    pass


class SelectionError(HyxError):
    pass


class LocatorKindError(SelectionError):
    pass


class UnselectableError(SelectionError):
    pass


# edit lists


class EditListSyntaxError(HyxError, ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownKeywordError(EditListSyntaxError):
    pass


class DanglingOperationError(EditListSyntaxError):
    pass


class TakeCountError(EditListSyntaxError):
    pass


class MalformedRefError(EditListSyntaxError):
    pass


class InlineTooLargeError(EditListSyntaxError):
    pass


class UnsupportedVersionError(EditListSyntaxError):
    pass


class AssemblyError(HyxError):
    def __init__(self, op_index: int, cause: Exception) -> None:
        self.op_index = op_index
        self.cause = cause
        super().__init__(f"operation {op_index} failed: {cause}")


# store


class StoreError(HyxError):
    pass


class DocumentNotFoundError(StoreError, LookupError):
    pass


class CorruptObjectError(StoreError):
    pass


class StorageFailureError(StoreError):
    pass


class StoreConfigError(StoreError, ValueError):
    pass


# network


class FetchError(HyxError):
    pass


class NetworkError(FetchError):
    pass


class RemoteNotFoundError(FetchError, LookupError):
    pass


class RemoteStatusError(FetchError):
    def __init__(self, status_code: int, url: str) -> None:
        self.status_code = status_code
        super().__init__(f"GET {url} returned HTTP {status_code}")


class DigestMismatchError(FetchError):
    pass


class SizeLimitError(FetchError):
    pass


class RemoteConfigError(FetchError, ValueError):
    pass


class ServeError(HyxError):
    pass


# command line


class InputReadError(HyxError):
    pass
