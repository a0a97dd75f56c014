use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mor::lab::{bsgs_attack, measure_composition, monomial_cycle_attack, mw_attack, validate_params};
use mor::protocol::{
    decode_message, decrypt, encode_message, encrypt, keygen, CiphertextJson, PrivateKeyJson, PublicKeyJson,
};
use mor::{
    Automorphism, Field, FieldSpec, KeyCheck, Matrix, MorCiphertext, MorParams, MorPrivateKey, MorPublicKey, Preset,
};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "mor", version, about = "MOR public-key cryptosystem over SL(d, q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair.
    Keygen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = KeyCheckArg::Conjugator)]
        key_check: KeyCheckArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_pub: PathBuf,
        #[arg(long)]
        out_priv: PathBuf,
    },
    /// Encrypt a short byte string.
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decrypt a ciphertext to the original bytes.
    Decrypt {
        #[arg(long = "priv")]
        private: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a security estimate as JSON.
    Analyze {
        #[command(flatten)]
        params: ParamArgs,
        /// Take parameters from a public key and test its lifted operator.
        #[arg(long = "pub")]
        public: Option<PathBuf>,
    },
    /// Run a desk-scale key-recovery attack on a public key.
    Attack {
        #[arg(long, value_enum)]
        model: AttackModel,
        #[arg(long = "pub")]
        public: PathBuf,
        /// Group-operation budget per discrete logarithm.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Count field multiplications for one automorphism composition.
    Bench {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, value_parser = parse_preset, conflicts_with_all = ["d", "p", "gamma", "modulus"])]
    preset: Option<Preset>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<BigUint>,
    #[arg(long)]
    gamma: Option<usize>,
    /// Monic modulus coefficients, constant term first, comma separated.
    #[arg(long)]
    modulus: Option<String>,
}

/// Irreducibility test applied to candidate conjugators.
#[derive(Clone, Copy, ValueEnum)]
enum KeyCheckArg {
    None,
    Conjugator,
    Lift,
}

impl From<KeyCheckArg> for KeyCheck {
    fn from(k: KeyCheckArg) -> Self {
        match k {
            KeyCheckArg::None => KeyCheck::None,
            KeyCheckArg::Conjugator => KeyCheck::IrreducibleConjugator,
            KeyCheckArg::Lift => KeyCheck::IrreducibleLift,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackModel {
    Monomial,
    Bsgs,
    Mw,
}

fn parse_preset(s: &str) -> std::result::Result<Preset, String> {
    s.parse().map_err(|e: mor::Error| e.to_string())
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("attack refused: {0}")]
    Refused(String),
    #[error(transparent)]
    Core(#[from] mor::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use mor::Error as E;
        match self {
            CliError::Malformed(_) | CliError::Io { .. } => 2,
            CliError::Refused(_) => 5,
            CliError::Core(e) => match e {
                E::SpecMismatch | E::InvalidSpec(_) | E::Dimension { .. } | E::Index(_) | E::Singular | E::NotInSl => 2,
                E::InvalidAutomorphism(_) | E::InvalidCiphertext(_) | E::Capacity { .. } | E::Format(_) => 3,
                E::KeygenFailure { .. } => 4,
                E::WrongAttackModel(_) => 5,
                E::Domain(_) | E::Unsupported(_) | E::NotFound | E::BudgetExhausted(_) => 1,
            },
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

impl ParamArgs {
    fn resolve(&self) -> Result<MorParams> {
        if let Some(preset) = self.preset {
            return Ok(preset.params()?);
        }
        let missing = |name: &str| CliError::Malformed(format!("--{name} or --preset is required"));
        let d = self.d.ok_or_else(|| missing("d"))?;
        let p = self.p.clone().ok_or_else(|| missing("p"))?;
        let gamma = self.gamma.unwrap_or(1);
        let spec = match &self.modulus {
            Some(text) => {
                let coeffs = text
                    .split(',')
                    .map(|c| c.trim().parse::<BigUint>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| CliError::Malformed(format!("modulus: {e}")))?;
                FieldSpec::with_modulus(p, gamma, coeffs)?
            }
            None => FieldSpec::new(p, gamma)?,
        };
        Ok(MorParams::new(Field::new(spec), d)?)
    }
}

fn rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_slice(&read(path)?).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable");
    out.push(b'\n');
    out
}

/// Stages every file in a temporary sibling and renames only once all are written.
fn write_atomic(files: &[(&Path, &[u8])]) -> Result<()> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    let mut staged = Vec::new();
    for (path, bytes) in files {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(path))?;
        tmp.write_all(bytes).map_err(io(path))?;
        staged.push((tmp, *path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).map_err(|e| io(path)(e.error))?;
    }
    Ok(())
}

fn emit<T: Serialize>(value: &T) {
    std::io::stdout().write_all(&to_json(value)).expect("stdout");
}

fn load_public(path: &Path) -> Result<MorPublicKey> {
    Ok(MorPublicKey::from_json(&read_json::<PublicKeyJson>(path)?)?)
}

#[derive(Serialize)]
struct ExponentReport {
    model: &'static str,
    exponent: u64,
}

#[derive(Serialize)]
struct BenchReport {
    preset: Option<&'static str>,
    seed: u64,
    #[serde(flatten)]
    cost: mor::lab::CompositionCost,
}

/// Generic attacks enumerate PGL(d, q) or F_q; refuse when that is out of reach.
const ATTACK_LIMIT_BITS: u64 = 64;

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Keygen {
            params,
            key_check,
            seed,
            out_pub,
            out_priv,
        } => {
            let params = params.resolve()?.with_key_check(key_check.into());
            let (pk, sk) = keygen(&params, &mut rng(seed))?;
            write_atomic(&[
                (&out_pub, &to_json(&pk.to_json())),
                (&out_priv, &to_json(&sk.to_json())),
            ])
        }
        Command::Encrypt {
            public,
            input,
            out,
            seed,
        } => {
            let pk = load_public(&public)?;
            let message = read(&input)?;
            let a = encode_message(&message, pk.params().field(), pk.params().degree())?;
            let ct = encrypt(&pk, &a, &mut rng(seed))?;
            write_atomic(&[(&out, &to_json(&ct.to_json()))])
        }
        Command::Decrypt { private, input, out } => {
            let sk = MorPrivateKey::from_json(&read_json::<PrivateKeyJson>(&private)?)?;
            let json: CiphertextJson = read_json(&input)?;
            if json.phi_r.d != sk.params().degree() {
                return Err(mor::Error::Dimension {
                    expected: sk.params().degree(),
                    got: json.phi_r.d,
                }
                .into());
            }
            let ct = MorCiphertext::from_json_with_field(sk.params().field(), &json)?;
            let message = decode_message(&decrypt(&sk, &ct)?)?;
            write_atomic(&[(&out, &message)])
        }
        Command::Analyze { params, public } => {
            let estimate = match public {
                Some(path) => {
                    let pk = load_public(&path)?;
                    let a = pk.phi().recover_conjugator()?;
                    validate_params(pk.params().degree(), pk.params().field().spec(), Some(&a))?
                }
                None => {
                    let params = params.resolve()?;
                    validate_params(params.degree(), params.field().spec(), None)?
                }
            };
            emit(&estimate);
            Ok(())
        }
        Command::Attack { model, public, budget } => {
            let pk = load_public(&public)?;
            let q_bits = pk.params().field().order().bits();
            let scale = match model {
                AttackModel::Monomial => q_bits,
                AttackModel::Bsgs | AttackModel::Mw => q_bits * pk.params().degree() as u64,
            };
            if scale > ATTACK_LIMIT_BITS {
                return Err(CliError::Refused(format!(
                    "search space of about 2^{scale} exceeds the desk-scale limit of 2^{ATTACK_LIMIT_BITS}"
                )));
            }
            match model {
                AttackModel::Monomial => emit(&monomial_cycle_attack(&pk, budget)?),
                AttackModel::Bsgs => emit(&ExponentReport {
                    model: "bsgs",
                    exponent: bsgs_attack(&pk, budget)?,
                }),
                AttackModel::Mw => emit(&ExponentReport {
                    model: "mw",
                    exponent: mw_attack(&pk, budget)?,
                }),
            }
            Ok(())
        }
        Command::Bench { params, seed } => {
            let preset = params.preset.map(Preset::name);
            let params = params.resolve()?;
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let (f, d) = (params.field(), params.degree());
            let phi = Automorphism::from_conjugator(&Matrix::random_gl(f, d, &mut rng))?;
            let psi = Automorphism::from_conjugator(&Matrix::random_gl(f, d, &mut rng))?;
            emit(&BenchReport {
                preset,
                seed,
                cost: measure_composition(&phi, &psi)?,
            });
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
