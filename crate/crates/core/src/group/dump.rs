use serde::{Deserialize, Serialize};

use super::FiniteGroup;

/// Text dump of a group. Field order is fixed; numbers are decimal strings
/// and encodings lowercase hex. `elements` and `table` are present together,
/// only for table-backed groups when requested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDump {
    pub order: String,
    pub prime: String,
    pub mode: String,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    /// One row per element; entries are space-separated element indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<String>>,
}

impl GroupDump {
    pub fn new(g: &FiniteGroup, with_table: bool) -> Self {
        let table = g.table().filter(|_| with_table);
        GroupDump {
            order: g.order().to_string(),
            prime: g.prime().to_string(),
            mode: g.mode().to_string(),
            generators: g
                .generators()
                .iter()
                .map(|&x| hex::encode(g.encoding(x)))
                .collect(),
            elements: table.map(|_| g.encodings().iter().map(hex::encode).collect()),
            table: table.map(|t| {
                t.chunks(g.order())
                    .map(|row| {
                        row.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect()
            }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dump serializes");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;

    #[test]
    fn dump_round_trips() {
        let g = dihedral8();
        let d = GroupDump::new(&g, true);
        assert_eq!(d.order, "8");
        assert_eq!(d.mode, "table");
        assert_eq!(d.generators, vec!["0100", "0001"]);
        assert_eq!(d.table.as_ref().unwrap().len(), 8);
        let text = d.to_text();
        assert!(text.find("\"order\"").unwrap() < text.find("\"prime\"").unwrap());
        assert_eq!(GroupDump::from_text(&text).unwrap(), d);
        assert!(GroupDump::new(&g, false).table.is_none());
    }
}
