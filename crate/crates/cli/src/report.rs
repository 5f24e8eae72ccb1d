use std::fmt::Write as _;

use rlim_core::prosys::Caps;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = S>, S: ToString>(&mut self, row: I) {
        let row: Vec<String> = row.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    /// The cell in `column` of the first row whose first cell is `key`.
    pub fn lookup(&self, key: &str, column: &str) -> Option<&str> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows.iter().find(|r| r[0] == key).map(|r| r[c].as_str())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CapUsage {
    pub max_chains: u64,
    pub max_subsets: u64,
    pub max_poset: u64,
    /// Largest poset handled.
    pub poset_size: usize,
    /// Largest number of strict chains (all lengths) enumerated for one system.
    pub chains: u128,
}

impl CapUsage {
    pub fn new(caps: &Caps) -> Self {
        CapUsage { max_chains: caps.max_chains, max_subsets: caps.max_subsets, max_poset: caps.max_poset, poset_size: 0, chains: 0 }
    }

    pub fn record(&mut self, poset: &rlim_core::prosys::Poset) {
        self.poset_size = self.poset_size.max(poset.len());
        self.chains = self.chains.max(poset.chain_counts().iter().sum());
    }
}

/// Everything a command produces. Timings are not part of the report so that
/// identical configurations give byte-identical output.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
    /// Hard checks that did not hold; a nonempty list means exit code 3.
    pub failures: Vec<String>,
    pub caps: CapUsage,
}

impl Report {
    pub fn new(command: &str, inputs: Value, caps: &Caps) -> Self {
        Report { command: command.into(), inputs, tables: Vec::new(), warnings: Vec::new(), failures: Vec::new(), caps: CapUsage::new(caps) }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "inputs: {}", self.inputs);
        for t in &self.tables {
            let _ = writeln!(out, "\n[{}]", t.name);
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|c| t.rows.iter().map(|r| r[c].chars().count()).chain([t.columns[c].chars().count()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(&t.columns));
            for r in &t.rows {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "\nwarning: {w}");
        }
        for f in &self.failures {
            let _ = writeln!(out, "\nFAILED: {f}");
        }
        let c = &self.caps;
        let _ = writeln!(
            out,
            "\ncaps: max_chains={} max_subsets={} max_poset={}; used: poset_size={} chains={}",
            c.max_chains, c.max_subsets, c.max_poset, c.poset_size, c.chains
        );
        out
    }

    /// One record per table row, prefixed by the table name; header records
    /// start with `#`.
    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        for t in &self.tables {
            let mut header = vec![format!("#{}", t.name)];
            header.extend(t.columns.iter().cloned());
            w.write_record(&header).expect("in-memory write");
            for r in &t.rows {
                let mut rec = vec![t.name.clone()];
                rec.extend(r.iter().cloned());
                w.write_record(&rec).expect("in-memory write");
            }
        }
        for f in &self.failures {
            w.write_record(["#failure", f.as_str()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}
