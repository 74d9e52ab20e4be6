/// Grüße — ünïcödé in comments and strings: ok
fn greet() -> &'static str {
    let _greeting: &str = "héllo wörld, sum of matters";
    "done"
}
