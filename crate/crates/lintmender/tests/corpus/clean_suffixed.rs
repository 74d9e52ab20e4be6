const MAX_RETRIES: u8 = 3_u8;
static TIMEOUT_MS: u64 = 5_000_u64;

fn totals() -> u64 {
    let base = 10_u64;
    let extra = 2_500_u64;
    base.wrapping_add(extra)
}
