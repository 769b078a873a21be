//! Participant demographics. Every field also accepts `"undisclosed"`.

use serde::{Deserialize, Serialize};

use crate::error::ServiceError;

pub const UNDISCLOSED: &str = "undisclosed";

pub const AGE_RANGES: &[&str] = &["under-18", "18-24", "25-34", "35-44", "45-54", "55-64", "65+"];
pub const GENDERS: &[&str] = &["female", "male", "non-binary", "other"];
pub const EXPERTISE: &[&str] = &["none", "hobbyist", "student", "professional"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demographics {
    pub age_range: String,
    pub gender: String,
    pub expertise: String,
}

/// Raw request body; fields are checked by [`Demographics::validate`].
#[derive(Debug, Default, Deserialize)]
pub struct DemographicsInput {
    pub age_range: Option<serde_json::Value>,
    pub gender: Option<serde_json::Value>,
    pub expertise: Option<serde_json::Value>,
}

fn check(field: &'static str, value: Option<serde_json::Value>, allowed: &[&str]) -> Result<String, ServiceError> {
    let value = value.ok_or_else(|| ServiceError::invalid(field, "missing"))?;
    let text = value.as_str().ok_or_else(|| ServiceError::invalid(field, format!("{value} is not a string")))?;
    if text == UNDISCLOSED || allowed.contains(&text) {
        Ok(text.to_string())
    } else {
        Err(ServiceError::invalid(field, format!("'{text}' is not one of {}, {UNDISCLOSED}", allowed.join(", "))))
    }
}

impl Demographics {
    pub fn validate(input: DemographicsInput) -> Result<Self, ServiceError> {
        Ok(Self {
            age_range: check("age_range", input.age_range, AGE_RANGES)?,
            gender: check("gender", input.gender, GENDERS)?,
            expertise: check("expertise", input.expertise, EXPERTISE)?,
        })
    }

    pub fn undisclosed() -> Self {
        Self { age_range: UNDISCLOSED.into(), gender: UNDISCLOSED.into(), expertise: UNDISCLOSED.into() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn input(v: serde_json::Value) -> DemographicsInput {
        serde_json::from_value(v).unwrap()
    }

    #[test]
    fn accepts_declared_values() {
        let d = Demographics::validate(input(json!({"age_range": "25-34", "gender": "undisclosed", "expertise": "student"})))
            .unwrap();
        assert_eq!(d.age_range, "25-34");
        assert_eq!(d.gender, UNDISCLOSED);
    }

    #[test]
    fn names_the_bad_field() {
        let err = Demographics::validate(input(json!({"age_range": "7", "gender": "male", "expertise": "none"})))
            .unwrap_err();
        assert!(matches!(err, ServiceError::Invalid { field: "age_range", .. }));
        let err = Demographics::validate(input(json!({"age_range": "18-24", "gender": "male"}))).unwrap_err();
        assert!(matches!(err, ServiceError::Invalid { field: "expertise", .. }));
        let err = Demographics::validate(input(json!({"age_range": "18-24", "gender": 3, "expertise": "none"})))
            .unwrap_err();
        assert!(matches!(err, ServiceError::Invalid { field: "gender", .. }));
    }
}
