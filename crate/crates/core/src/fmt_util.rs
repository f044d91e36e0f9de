//! Helpers shared by the canonical printers.

/// True when `s` contains a `+` or binary `-` outside parentheses.
pub(crate) fn has_top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 => return true,
            b'-' if depth == 0 && i > 0 => return true,
            _ => {}
        }
    }
    false
}

/// True when `s` has a top-level `/` (so it cannot be followed by `*` unparenthesized
/// without changing the printed shape).
pub(crate) fn has_top_level_div(s: &str) -> bool {
    let mut depth = 0i32;
    for b in s.bytes() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

/// Wraps `s` in parentheses when it is a sum.
pub(crate) fn paren_sum(s: String) -> String {
    if has_top_level_sum(&s) {
        format!("({s})")
    } else {
        s
    }
}

/// Wraps `s` for use as the left factor of a product.
pub(crate) fn paren_factor(s: String) -> String {
    if has_top_level_sum(&s) || has_top_level_div(&s) {
        format!("({s})")
    } else {
        s
    }
}

/// Joins signed terms as `a + b - c`; each entry is `(negative, magnitude)`.
pub(crate) fn join_terms(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, mag)) in terms.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(mag);
    }
    out
}
