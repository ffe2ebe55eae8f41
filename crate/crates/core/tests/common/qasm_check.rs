//! Grammar-level well-formedness check for the OPENQASM 2.0 subset the
//! perceptron emits: header, include, `qreg`/`creg`, `ry`, `x`, `cx`, `ccx`,
//! `c3x`, `c4x` and `measure`. Also counts gates by arity.

#[derive(Debug, Default, PartialEq)]
pub struct Parsed {
    pub qreg: usize,
    pub creg: usize,
    pub single_qubit: usize,
    pub multi_qubit: usize,
    pub measurements: usize,
}

fn parse_operand(s: &str, reg: &str, size: usize) -> Result<usize, String> {
    let inner = s
        .strip_prefix(reg)
        .and_then(|r| r.strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("bad operand {s:?}"))?;
    let idx: usize = inner.parse().map_err(|_| format!("bad index {s:?}"))?;
    if idx >= size {
        return Err(format!("index out of range {s:?}"));
    }
    Ok(idx)
}

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let value = if body == "0" {
        0.0
    } else {
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n, d.parse::<f64>().map_err(|_| format!("bad angle {s}"))?),
            None => (body, 1.0),
        };
        let coeff = match num {
            "pi" => 1.0,
            other => other
                .strip_suffix("*pi")
                .and_then(|c| c.parse::<f64>().ok())
                .ok_or_else(|| format!("bad angle {s}"))?,
        };
        coeff * std::f64::consts::PI / den
    };
    Ok(if neg { -value } else { value })
}

pub fn check(text: &str) -> Result<Parsed, String> {
    if !text.ends_with('\n') || text.contains('\r') {
        return Err("expected LF line endings".into());
    }
    let mut lines = text.lines();
    if lines.next() != Some("OPENQASM 2.0;") {
        return Err("missing version header".into());
    }
    if lines.next() != Some("include \"qelib1.inc\";") {
        return Err("missing include".into());
    }
    let mut p = Parsed::default();
    for line in lines {
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| format!("missing ';' in {line:?}"))?;
        if let Some(rest) = stmt.strip_prefix("qreg ") {
            p.qreg = parse_operand(rest, "q", usize::MAX)?;
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("creg ") {
            p.creg = parse_operand(rest, "c", usize::MAX)?;
            continue;
        }
        if p.qreg == 0 || p.creg == 0 {
            return Err("gate before register declaration".into());
        }
        if let Some(rest) = stmt.strip_prefix("measure ") {
            let (q, c) = rest.split_once(" -> ").ok_or("bad measure")?;
            parse_operand(q, "q", p.qreg)?;
            parse_operand(c, "c", p.creg)?;
            p.measurements += 1;
            continue;
        }
        let (head, args) = stmt
            .split_once(' ')
            .ok_or_else(|| format!("bad statement {stmt:?}"))?;
        let (name, param) = match head.split_once('(') {
            Some((n, rest)) => (n, Some(rest.strip_suffix(')').ok_or("unclosed parameter")?)),
            None => (head, None),
        };
        let operands: Vec<usize> = args
            .split(',')
            .map(|a| parse_operand(a, "q", p.qreg))
            .collect::<Result<_, _>>()?;
        let mut unique = operands.clone();
        unique.sort_unstable();
        unique.dedup();
        if unique.len() != operands.len() {
            return Err(format!("repeated operand in {stmt:?}"));
        }
        let arity = match (name, param) {
            ("ry", Some(a)) => {
                parse_angle(a)?;
                1
            }
            ("x", None) => 1,
            ("cx", None) => 2,
            ("ccx", None) => 3,
            ("c3x", None) => 4,
            ("c4x", None) => 5,
            _ => return Err(format!("unknown gate {head:?}")),
        };
        if operands.len() != arity {
            return Err(format!("wrong arity in {stmt:?}"));
        }
        if arity == 1 {
            p.single_qubit += 1;
        } else {
            p.multi_qubit += 1;
        }
    }
    Ok(p)
}
