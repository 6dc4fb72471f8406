//! Browser bindings. Each call returns the same JSON responses the `waring`
//! binary prints, so the page and the command line never disagree.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use waring_cli::{run_command, Command, FamilySpec, Request};

const PRECISION: u32 = 256;

fn ask(command: Command, form: &str) -> Value {
    let req = Request::new(command, Some(form.to_owned()));
    serde_json::to_value(run_command(&req, PRECISION)).expect("responses serialize")
}

/// Complex rank, real rank and small-rank classification of one form.
#[wasm_bindgen]
pub fn analyze(form: &str) -> String {
    json!({
        "rank": ask(Command::Rank, form),
        "real_rank": ask(Command::RealRank, form),
        "classify": ask(Command::Classify, form),
    })
    .to_string()
}

#[wasm_bindgen]
pub fn decompose(form: &str, numeric_ok: bool) -> String {
    let mut req = Request::new(Command::Decompose, Some(form.to_owned()));
    req.options.numeric_ok = numeric_ok;
    serde_json::to_string(&run_command(&req, PRECISION)).expect("responses serialize")
}

/// The family x^(2k) + C(2k,k) λ x^k y^k + y^(2k).
#[wasm_bindgen]
pub fn flambda(k: usize, lambda: &str) -> String {
    let mut req = Request::new(Command::Family, None);
    req.options.family = Some(FamilySpec::Flambda {
        k,
        lambda: lambda.to_owned(),
    });
    serde_json::to_string(&run_command(&req, PRECISION)).expect("responses serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn analyze_quartic() {
        let v = parse(analyze("x^4 + 4*x^2*y^2 + y^4"));
        assert_eq!(v["rank"]["result"]["complex_rank"], 3);
        assert_eq!(v["real_rank"]["status"], "ok");
        assert_eq!(v["classify"]["result"]["classification"]["kind"], "rank3");
    }

    #[test]
    fn bad_input_stays_in_band() {
        let v = parse(analyze("x^4 +"));
        assert_eq!(v["rank"]["status"], "error");
        assert_eq!(parse(flambda(2, "one"))["status"], "error");
    }

    #[test]
    fn decompose_needs_consent_for_numbers() {
        let f = "3*x^7 + 210*x^4*y^3 + 84*x*y^6";
        assert_eq!(parse(decompose(f, false))["status"], "error");
        assert_eq!(parse(decompose(f, true))["result"]["rank"], 3);
    }

    #[test]
    fn unit_lambda() {
        assert_eq!(parse(flambda(3, "1"))["result"]["complex_rank"], 3);
        assert_eq!(parse(flambda(3, "1/2"))["result"]["complex_rank"], 4);
    }
}
