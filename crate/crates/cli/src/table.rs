//! CSV output: comma separated, header row, 17 significant digits.

pub(crate) fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub(crate) struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub(crate) fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut table = Self { writer: csv::Writer::from_writer(Vec::new()) };
        table.row(header.iter().map(|h| h.as_ref().to_string()));
        table
    }

    pub(crate) fn row(&mut self, cells: impl IntoIterator<Item = String>) {
        self.writer.write_record(cells).expect("writing to memory");
    }

    pub(crate) fn numbers(&mut self, values: &[f64]) {
        self.row(values.iter().map(|&v| number(v)));
    }

    pub(crate) fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("writing to memory");
        String::from_utf8(bytes).expect("cells are UTF-8")
    }
}
