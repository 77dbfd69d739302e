//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the captured output, so tests can drive it without a process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use jetschouten::frontend::{print, ParseError, Session, Style};
use jetschouten::multivector::{evaluate, insert};
use jetschouten::schouten::{
    bracket, bracket_recursive, is_poisson, jacobi_defect, q_field, Method,
};
use jetschouten::variational::{equivalent, normalize_to_ba_form};
use jetschouten::verify::{run_all, GeneratorConfig};
use jetschouten::{DiffPolynomial, Functional, Geometry, Multivector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "jetschouten",
    version,
    about = "Exact variational multivector calculus and the Schouten bracket"
)]
struct Cli {
    /// Base dimension, number of fibers and number of covector slots.
    #[arg(long, global = true, value_name = "N,M,S")]
    geometry: Option<String>,
    /// Session file with `geometry`, `let` and `slot` declarations.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    /// Print polynomials as LaTeX.
    #[arg(long, global = true)]
    latex: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Poisson,
    Recursive,
    Qfield,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracket of two multivectors.
    Bracket {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_enum, default_value = "poisson")]
        method: MethodArg,
    },
    /// Bracket through insertion of fresh covector slots.
    BracketRecursive {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Evaluate a k-vector on covector slots (default 1..k).
    Eval {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_delimiter = ',')]
        slots: Vec<String>,
    },
    /// Insert a covector slot into the last argument.
    Insert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        slot: String,
    },
    /// Integrate by parts to the form ⟨b, A(b,…,b)⟩.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Whether two densities define the same functional.
    Equiv {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Degree in the odd variables.
    Degree {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Graded Jacobi defect of three multivectors.
    Jacobi {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// Whether a bivector P satisfies ⟦P,P⟧ = 0.
    PoissonCheck {
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    /// Sections of the graded evolutionary field Q^ξ.
    Qfield {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Run the verification batteries.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Parse(String),
    Domain(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<jetschouten::Error> for Failure {
    fn from(e: jetschouten::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

struct Ctx {
    session: Session,
    style: Style,
    out: String,
}

impl Ctx {
    fn geometry(&self) -> Geometry {
        self.session.geometry()
    }

    fn show(&self, f: &DiffPolynomial) -> String {
        print(f, self.geometry(), self.style)
    }

    fn density(&self, text: &str) -> Result<DiffPolynomial, Failure> {
        Ok(self.session.parse(text)?)
    }

    fn functional(&self, text: &str) -> Result<Functional, Failure> {
        Ok(Functional::new(self.density(text)?, self.geometry())?)
    }

    fn multivector(&self, text: &str) -> Result<Multivector, Failure> {
        Ok(Multivector::from_density(
            self.density(text)?,
            self.geometry(),
        )?)
    }

    fn slot(&self, text: &str) -> Result<u32, Failure> {
        let text = text.trim();
        if let Some(j) = self.session.slot_alias(text) {
            return Ok(j);
        }
        let digits = text.strip_prefix('p').unwrap_or(text);
        digits
            .parse()
            .map_err(|_| Failure::Parse(format!("`{text}` is not a covector slot")))
    }

    /// The b-form representative when it exists, else the density itself.
    fn show_class(&self, m: &Multivector) -> String {
        if m.is_trivial() {
            return "0".into();
        }
        let f = normalize_to_ba_form(m.functional()).unwrap_or_else(|_| m.density().clone());
        self.show(&f)
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }
}

fn parse_geometry(text: &str) -> Result<Geometry, Failure> {
    let parts: Result<Vec<usize>, _> = text.split(',').map(|p| p.trim().parse()).collect();
    match parts.as_deref() {
        Ok([n, m, s]) => Ok(Geometry::new(*n, *m, *s)?),
        _ => Err(Failure::Parse(format!(
            "--geometry expects N,M,S, got `{text}`"
        ))),
    }
}

fn session(cli: &Cli) -> Result<Session, Failure> {
    let flag = cli.geometry.as_deref().map(parse_geometry).transpose()?;
    let Some(path) = &cli.file else {
        return Ok(Session::new(flag.unwrap_or(Geometry::new(1, 1, 6)?)));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let session = Session::from_source(&text)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    if flag.is_some_and(|g| g != session.geometry()) {
        return Err(Failure::Parse(format!(
            "--geometry conflicts with `{}` declared in {}",
            session.geometry(),
            path.display()
        )));
    }
    Ok(session)
}

fn execute(cli: Cli) -> Result<(i32, String), Failure> {
    let style = if cli.latex {
        Style::Latex
    } else {
        Style::Plain
    };
    let mut ctx = Ctx {
        session: session(&cli)?,
        style,
        out: String::new(),
    };
    let code = match &cli.command {
        Command::Bracket { a, b, method } => {
            let (xi, eta) = (ctx.multivector(a)?, ctx.multivector(b)?);
            let method = match method {
                MethodArg::Poisson => Method::Poisson,
                MethodArg::Recursive => Method::Recursive,
                MethodArg::Qfield => Method::QField,
            };
            let report = bracket(&xi, &eta, method)?;
            let shown = ctx.show_class(&report.result);
            ctx.line(shown);
            match report.degree() {
                Some(d) => ctx.line(format!("degree {d}")),
                None => ctx.line("zero class"),
            }
            EXIT_OK
        }
        Command::BracketRecursive { a, b } => {
            let (xi, eta) = (ctx.multivector(a)?, ctx.multivector(b)?);
            let r = bracket_recursive(&xi, &eta)?;
            let slots: Vec<String> = r.slots.iter().map(|j| format!("p{j}")).collect();
            let inserted = ctx.show(r.inserted.density());
            let rebuilt = ctx.show_class(&r.reconstructed);
            ctx.line(format!("slots {}", slots.join(" ")));
            ctx.line(format!("inserted {inserted}"));
            ctx.line(format!("bracket {rebuilt}"));
            if r.reconstructed.is_trivial() {
                ctx.line("zero class");
            } else {
                ctx.line(format!("degree {}", r.reconstructed.degree()));
            }
            EXIT_OK
        }
        Command::Eval { a, slots } => {
            let xi = ctx.multivector(a)?;
            let slots: Vec<u32> = if slots.is_empty() {
                (1..=xi.degree() as u32).collect()
            } else {
                slots
                    .iter()
                    .map(|s| ctx.slot(s))
                    .collect::<Result<_, _>>()?
            };
            let value = evaluate(&xi, &slots)?;
            let shown = ctx.show(value.density());
            ctx.line(shown);
            EXIT_OK
        }
        Command::Insert { a, slot } => {
            let xi = ctx.multivector(a)?;
            let j = ctx.slot(slot)?;
            let value = insert(&xi, j)?;
            let shown = ctx.show(value.density());
            ctx.line(shown);
            ctx.line(format!("degree {}", value.degree()));
            EXIT_OK
        }
        Command::Normalize { a } => {
            let f = ctx.functional(a)?;
            let n = normalize_to_ba_form(&f)?;
            let shown = ctx.show(&n);
            ctx.line(shown);
            EXIT_OK
        }
        Command::Equiv { a, b } => {
            let (f, g) = (ctx.functional(a)?, ctx.functional(b)?);
            if equivalent(&f, &g)? {
                ctx.line("equivalent");
                EXIT_OK
            } else {
                ctx.line("not equivalent");
                EXIT_FALSE
            }
        }
        Command::Degree { a } => {
            let f = ctx.density(a)?;
            let degrees: Vec<String> = f.b_degrees().iter().map(usize::to_string).collect();
            match degrees.len() {
                0 => ctx.line("zero"),
                1 => ctx.line(&degrees[0]),
                _ => ctx.line(format!("mixed {}", degrees.join(" "))),
            }
            EXIT_OK
        }
        Command::Jacobi { a, b, c } => {
            let (x, y, z) = (
                ctx.multivector(a)?,
                ctx.multivector(b)?,
                ctx.multivector(c)?,
            );
            let defect = jacobi_defect(&x, &y, &z)?;
            let shown = ctx.show_class(&defect);
            ctx.line(shown);
            if defect.is_trivial() {
                ctx.line("zero class");
                EXIT_OK
            } else {
                ctx.line(format!("degree {}", defect.degree()));
                EXIT_FALSE
            }
        }
        Command::PoissonCheck { p } => {
            let p = ctx.multivector(p)?;
            let verdict = is_poisson(&p)?;
            match verdict.witness {
                None => {
                    ctx.line("PASS");
                    EXIT_OK
                }
                Some(w) => {
                    let shown = ctx.show_class(&w);
                    ctx.line("FAIL");
                    ctx.line(format!("witness {shown}"));
                    EXIT_FALSE
                }
            }
        }
        Command::Qfield { a } => {
            let xi = ctx.multivector(a)?;
            let q = q_field(&xi);
            let m = ctx.geometry().m;
            for alpha in 0..m {
                let shown = ctx.show(&q.q_sections()[alpha]);
                ctx.line(format!("q-section {} {shown}", alpha + 1));
            }
            for alpha in 0..m {
                let shown = ctx.show(&q.b_sections()[alpha]);
                ctx.line(format!("b-section {} {shown}", alpha + 1));
            }
            ctx.line(format!(
                "parity {}",
                if q.is_odd() { "odd" } else { "even" }
            ));
            EXIT_OK
        }
        Command::Selftest { seed, cases } => {
            let cfg = GeneratorConfig::with_seed(*seed);
            let reports = run_all(&cfg, *cases);
            let mut ok = true;
            for r in &reports {
                ctx.line(r.summary_line());
                ok &= r.passed();
            }
            for r in &reports {
                for f in &r.failures {
                    let _ = writeln!(
                        ctx.out,
                        "# {} case {} seed {}: {} [{}]",
                        r.name,
                        f.case,
                        f.seed,
                        f.detail,
                        f.inputs.join("; ")
                    );
                }
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_FALSE
            }
        }
    };
    Ok((code, ctx.out))
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    match execute(cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Parse(msg)) => Outcome {
            code: EXIT_PARSE,
            stdout: String::new(),
            stderr: format!("parse error: {msg}\n"),
        },
        Err(Failure::Domain(msg)) => Outcome {
            code: EXIT_DOMAIN,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}
