//! The `dump` command: full-precision listings of basis states, channels
//! and correction operators. Complex entries serialize as [re, im] pairs.

use std::fmt::Write as _;

use num_complex::Complex64;
use qutrit_teleport::states::{
    channel, leslie_state, printed_correction, synthesize_correction, ChannelKind, Provenance,
};
use serde::{Deserialize, Serialize};

use crate::output::{csv_row, num, to_json, FormatArg, Sink};
use crate::{CliError, ObjectArg};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDump {
    pub schema_version: u32,
    pub object: String,
    pub vectors: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelsDump {
    pub schema_version: u32,
    pub object: String,
    pub u: Vec<Complex64>,
    pub nu: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDump {
    pub outcome: usize,
    pub matrix: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorsDump {
    pub schema_version: u32,
    pub object: String,
    pub channel: ChannelKind,
    pub provenance: Provenance,
    pub operators: Vec<OperatorDump>,
}

fn fmt_c(z: Complex64) -> String {
    format!("{:+.15}{:+.15}i", z.re, z.im)
}

pub fn basis_dump() -> BasisDump {
    BasisDump {
        schema_version: 1,
        object: "basis".into(),
        vectors: (0..9)
            .map(|k| leslie_state(k).unwrap().amplitudes().to_vec())
            .collect(),
    }
}

pub fn channels_dump() -> ChannelsDump {
    ChannelsDump {
        schema_version: 1,
        object: "channels".into(),
        u: channel(ChannelKind::Unitary).amplitudes().to_vec(),
        nu: channel(ChannelKind::NonUnitary).amplitudes().to_vec(),
    }
}

pub fn operators_dump(kind: ChannelKind, provenance: Provenance) -> OperatorsDump {
    let operators = (0..9)
        .map(|k| {
            let correction = match provenance {
                Provenance::Printed => printed_correction(kind, k).unwrap(),
                Provenance::Synthesized => synthesize_correction(kind, k).unwrap(),
            };
            OperatorDump {
                outcome: k,
                matrix: (0..3)
                    .map(|r| (0..3).map(|c| correction.op.get(r, c)).collect())
                    .collect(),
            }
        })
        .collect();
    OperatorsDump {
        schema_version: 1,
        object: "operators".into(),
        channel: kind,
        provenance,
        operators,
    }
}

fn basis_text(dump: &BasisDump) -> String {
    let mut s = String::new();
    for (k, vector) in dump.vectors.iter().enumerate() {
        let _ = writeln!(s, "basis {k}:");
        for z in vector {
            let _ = writeln!(s, "  {}", fmt_c(*z));
        }
    }
    s
}

fn basis_csv(dump: &BasisDump) -> String {
    let mut s = csv_row(["k", "component", "re", "im"].map(String::from));
    for (k, vector) in dump.vectors.iter().enumerate() {
        for (i, z) in vector.iter().enumerate() {
            s.push_str(&csv_row([
                k.to_string(),
                i.to_string(),
                num(z.re),
                num(z.im),
            ]));
        }
    }
    s
}

fn channels_text(dump: &ChannelsDump) -> String {
    let mut s = String::new();
    for (name, amps) in [("u", &dump.u), ("nu", &dump.nu)] {
        let _ = writeln!(s, "channel {name}:");
        for z in amps {
            let _ = writeln!(s, "  {}", fmt_c(*z));
        }
    }
    s
}

fn channels_csv(dump: &ChannelsDump) -> String {
    let mut s = csv_row(["channel", "component", "re", "im"].map(String::from));
    for (name, amps) in [("u", &dump.u), ("nu", &dump.nu)] {
        for (i, z) in amps.iter().enumerate() {
            s.push_str(&csv_row([
                name.to_string(),
                i.to_string(),
                num(z.re),
                num(z.im),
            ]));
        }
    }
    s
}

fn operators_text(dump: &OperatorsDump) -> String {
    let mut s = String::new();
    let provenance = match dump.provenance {
        Provenance::Printed => "printed",
        Provenance::Synthesized => "synthesized",
    };
    let _ = writeln!(s, "channel: {}   provenance: {provenance}", dump.channel);
    for op in &dump.operators {
        let _ = writeln!(s, "outcome {}:", op.outcome);
        for row in &op.matrix {
            let cells: Vec<String> = row.iter().map(|z| fmt_c(*z)).collect();
            let _ = writeln!(s, "  [{}]", cells.join(", "));
        }
    }
    s
}

fn operators_csv(dump: &OperatorsDump) -> String {
    let mut s = csv_row(["outcome", "row", "col", "re", "im"].map(String::from));
    for op in &dump.operators {
        for (r, row) in op.matrix.iter().enumerate() {
            for (c, z) in row.iter().enumerate() {
                s.push_str(&csv_row([
                    op.outcome.to_string(),
                    r.to_string(),
                    c.to_string(),
                    num(z.re),
                    num(z.im),
                ]));
            }
        }
    }
    s
}

pub fn execute(
    object: ObjectArg,
    channel_arg: Option<ChannelKind>,
    provenance: Provenance,
    format: FormatArg,
    sink: &Sink,
) -> Result<i32, CliError> {
    let content = match object {
        ObjectArg::Basis => {
            let dump = basis_dump();
            match format {
                FormatArg::Text => basis_text(&dump),
                FormatArg::Json => to_json(&dump)?,
                FormatArg::Csv => basis_csv(&dump),
            }
        }
        ObjectArg::Channels => {
            let dump = channels_dump();
            match format {
                FormatArg::Text => channels_text(&dump),
                FormatArg::Json => to_json(&dump)?,
                FormatArg::Csv => channels_csv(&dump),
            }
        }
        ObjectArg::Operators => {
            let kind = channel_arg.ok_or_else(|| {
                CliError::Usage("dump operators needs --channel u or --channel nu".into())
            })?;
            let dump = operators_dump(kind, provenance);
            match format {
                FormatArg::Text => operators_text(&dump),
                FormatArg::Json => to_json(&dump)?,
                FormatArg::Csv => operators_csv(&dump),
            }
        }
    };
    sink.write(&content)?;
    Ok(0)
}
