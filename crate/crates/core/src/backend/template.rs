//! `{name}` placeholder substitution for query templates.
//!
//! A placeholder is `{` + identifier + `}`. Identifiers not in the parameter
//! list are left verbatim, so vendor syntax such as `{id: $id}` or JSON object
//! braces passes through untouched.

pub fn render(template: &str, params: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let ident_len = after
            .char_indices()
            .find(|&(i, c)| !(c == '_' || c.is_ascii_alphanumeric() && !(i == 0 && c.is_ascii_digit())))
            .map_or(after.len(), |(i, _)| i);
        let ident = &after[..ident_len];
        let closed = after[ident_len..].starts_with('}');
        match params.iter().find(|(k, _)| *k == ident) {
            Some((_, v)) if closed && !ident.is_empty() => {
                out.push_str(v);
                rest = &after[ident_len + 1..];
            }
            _ => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

/// Names of all `{identifier}` placeholders in `template`.
pub fn placeholders(template: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let after = &rest[open + 1..];
        if let Some(close) = after.find('}') {
            let ident = &after[..close];
            let valid = !ident.is_empty()
                && !ident.starts_with(|c: char| c.is_ascii_digit())
                && ident.chars().all(|c| c == '_' || c.is_ascii_alphanumeric());
            if valid {
                out.push(ident);
            }
        }
        rest = after;
    }
    out
}
