use std::ffi::OsString;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::commands::Context;
use crate::{Cli, Output};

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Everything needed to repeat a run and check that it repeated.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest(Value);

impl RunManifest {
    pub(crate) fn new(argv: &[OsString], cli: &Cli, ctx: &Context, out: &Output) -> Self {
        let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
        let inputs: Vec<Value> = ctx.inputs.iter().map(|(p, h)| json!({"path": p, "sha256": h})).collect();
        RunManifest(json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "inputs": inputs,
            "options": format!("{:?}", cli.command),
            "workers": cli.workers,
            "seed": Value::Null,
            "outputs": {
                "stdout_sha256": digest(out.stdout.as_bytes()),
                "stdout_bytes": out.stdout.len(),
            },
            "exit_code": out.code,
        }))
    }

    pub fn as_json(&self) -> &Value {
        &self.0
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(&self.0).expect("serializable");
        std::fs::write(path, text + "\n")
    }
}
