fn reinterpret(v: &mut Vec<u8>) {
    let len = unsafe { v.len() };
    unsafe {
        v.set_len(len);
    }
    let _tail = unsafe { v.as_mut_ptr() };
}
