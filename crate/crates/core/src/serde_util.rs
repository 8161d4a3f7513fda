//! Serialize integers as decimal strings so JSON consumers never lose precision.

pub mod decimal {
    use serde::Serializer;
    use std::fmt::Display;

    pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }
}

pub mod decimal_opt {
    use serde::Serializer;
    use std::fmt::Display;

    pub fn serialize<T: Display, S: Serializer>(
        value: &Option<T>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }
}

pub mod decimal_vec_pairs {
    use serde::ser::{SerializeSeq, Serializer};
    use std::fmt::Display;

    pub fn serialize<A: Display, B: Display, S: Serializer>(
        pairs: &[(A, B)],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(pairs.len()))?;
        for (a, b) in pairs {
            seq.serialize_element(&[a.to_string(), b.to_string()])?;
        }
        seq.end()
    }
}

pub mod decimal_vec {
    use serde::ser::{SerializeSeq, Serializer};
    use std::fmt::Display;

    pub fn serialize<T: Display, S: Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }
}
