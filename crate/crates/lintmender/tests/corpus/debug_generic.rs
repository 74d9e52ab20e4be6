pub struct Pair<K, V> {
    pub key: K,
    pub value: V,
}
