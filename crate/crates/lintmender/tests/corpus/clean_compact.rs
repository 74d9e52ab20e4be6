fn compact() -> bool { true }