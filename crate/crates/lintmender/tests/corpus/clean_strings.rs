//! Strings and comments keep their digits to themselves.

fn banner() -> String {
    let plain = "version 2.0 build 42";
    let raw = r#"raw "3.14" text"#;
    let escaped = "tab\t and \"quote\" and backslash \\";
    // 99 bottles on the wall
    /* block comment with 1000 numbers */
    format!("{plain} {raw} {escaped}")
}
