//! JSON point parsing for scaffold spaces.  Decimal literals are kept
//! exact (rational) so vistal systems never see rounded coefficients.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{bail, Context, Result};

use treespace::scalar::{format_sig, rat_from_decimal_str, Scalar};
use treespace::space::{Axis, Space};
use treespace::{ExactPoint, GenericPoint, Point, Rat};

/// Parse a single JSON object {"axis": length, ...} into an exact point.
pub fn parse_exact_point(space: &Arc<Space>, text: &str) -> Result<ExactPoint> {
    let value: serde_json::Value =
        serde_json::from_str(text).context("point is not valid JSON")?;
    exact_point_from_value(space, &value)
}

pub fn exact_point_from_value(space: &Arc<Space>, value: &serde_json::Value) -> Result<ExactPoint> {
    let serde_json::Value::Object(map) = value else {
        bail!("a point must be a JSON object of axis: length pairs");
    };
    let mut coords: BTreeMap<Axis, Rat> = BTreeMap::new();
    for (name, v) in map {
        let serde_json::Value::Number(num) = v else {
            bail!("coordinate of {name:?} is not a number");
        };
        let r = rat_from_decimal_str(&num.to_string())
            .with_context(|| format!("coordinate of {name:?}"))?;
        coords.insert(Axis::named(name.clone()), r);
    }
    Ok(GenericPoint::new(space.clone(), coords)?)
}

pub fn parse_point(space: &Arc<Space>, text: &str) -> Result<Point> {
    Ok(parse_exact_point(space, text)?.to_f64_point())
}

/// Parse a JSON array of point objects.
pub fn parse_point_array(space: &Arc<Space>, text: &str) -> Result<Vec<Point>> {
    let value: serde_json::Value =
        serde_json::from_str(text).context("points file is not valid JSON")?;
    let serde_json::Value::Array(items) = value else {
        bail!("a points file must hold a JSON array of point objects");
    };
    items
        .iter()
        .map(|v| Ok(exact_point_from_value(space, v)?.to_f64_point()))
        .collect()
}

/// Render a point as a JSON object with 12 significant digits.
pub fn point_to_json(point: &Point) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (axis, v) in point.coords() {
        let formatted = format_sig(Scalar::to_f64(v), 12);
        let number: serde_json::Number = formatted
            .parse()
            .unwrap_or_else(|_| serde_json::Number::from(0));
        map.insert(axis.to_string(), serde_json::Value::Number(number));
    }
    serde_json::Value::Object(map)
}
