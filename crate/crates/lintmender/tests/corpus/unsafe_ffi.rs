extern "C" {
    fn external_init();
}

unsafe fn raw_reset() {}

fn start() {
    unsafe { external_init() };
    // SAFETY: initialization happens once before any reads
    unsafe { external_init() };
    unsafe { raw_reset() };
    unsafe { raw_reset() };
}
