fn tables() {
    let primes = [2, 3, 5];
    let nested = [[7], [8]];
}
