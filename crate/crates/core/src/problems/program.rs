//! Straight-line program emulation: a 10-line program of generic
//! instructions `x = f_i(x)` plus a mapping from `f_1..f_5` to concrete
//! unary functions.

use rand::Rng;

use super::ProblemError;
use crate::genome::{Genome, GenomeTemplate};
use crate::omnirep::OmnirepProblem;

pub const PROGRAM_LINES: usize = 10;
pub const GENERIC_INSTRUCTIONS: usize = 5;
pub const DEFAULT_CLAMP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instruction {
    Add1,
    Minus2,
    Mul10,
    Div2,
    Neg,
    Fabs,
    Sin,
    Cos,
    Tan,
    Square,
    SqrtAbs,
    Id,
}

impl Instruction {
    pub const POOL: [Instruction; 12] = [
        Instruction::Add1,
        Instruction::Minus2,
        Instruction::Mul10,
        Instruction::Div2,
        Instruction::Neg,
        Instruction::Fabs,
        Instruction::Sin,
        Instruction::Cos,
        Instruction::Tan,
        Instruction::Square,
        Instruction::SqrtAbs,
        Instruction::Id,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Instruction::Add1 => "add1",
            Instruction::Minus2 => "minus2",
            Instruction::Mul10 => "mul10",
            Instruction::Div2 => "div2",
            Instruction::Neg => "neg",
            Instruction::Fabs => "fabs",
            Instruction::Sin => "sin",
            Instruction::Cos => "cos",
            Instruction::Tan => "tan",
            Instruction::Square => "square",
            Instruction::SqrtAbs => "sqrt_abs",
            Instruction::Id => "id",
        }
    }

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Instruction::Add1 => x + 1.0,
            Instruction::Minus2 => x - 2.0,
            Instruction::Mul10 => x * 10.0,
            Instruction::Div2 => x / 2.0,
            Instruction::Neg => -x,
            Instruction::Fabs => x.abs(),
            Instruction::Sin => x.sin(),
            Instruction::Cos => x.cos(),
            Instruction::Tan => x.tan(),
            Instruction::Square => x * x,
            Instruction::SqrtAbs => x.abs().sqrt(),
            Instruction::Id => x,
        }
    }
}

/// Executes `x = v` followed by `x = pool[imap[op - 1]](x)` for every opcode.
/// After each line `x` is clamped to `[-clamp, clamp]` and NaN becomes 0.
///
/// Panics if an opcode or mapping entry is out of range.
pub fn run_program(opcodes: &[i64], imap: &[i64], pool: &[Instruction], v: f64, clamp: f64) -> f64 {
    opcodes.iter().fold(v, |x, &op| {
        let f = pool[imap[(op - 1) as usize] as usize];
        let y = f.apply(x);
        if y.is_nan() {
            0.0
        } else {
            y.clamp(-clamp, clamp)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramProblem {
    pub pool: Vec<Instruction>,
    pub target_opcodes: Vec<i64>,
    pub target_imap: Vec<i64>,
    pub inputs: Vec<f64>,
    pub clamp: f64,
}

impl ProgramProblem {
    /// A random target program over the full pool, with `n_inputs` inputs
    /// drawn uniformly from `[-input_range, input_range]`.
    pub fn generate<R: Rng + ?Sized>(rng: &mut R, n_inputs: usize, input_range: f64) -> Self {
        let pool = Instruction::POOL.to_vec();
        let target_opcodes = (0..PROGRAM_LINES)
            .map(|_| rng.random_range(1..=GENERIC_INSTRUCTIONS as i64))
            .collect();
        let target_imap = (0..GENERIC_INSTRUCTIONS)
            .map(|_| rng.random_range(0..pool.len() as i64))
            .collect();
        let inputs = (0..n_inputs)
            .map(|_| rng.random_range(-input_range..=input_range))
            .collect();
        Self {
            pool,
            target_opcodes,
            target_imap,
            inputs,
            clamp: DEFAULT_CLAMP,
        }
    }

    fn check(&self, opcodes: &[i64], imap: &[i64]) -> Result<(), ProblemError> {
        if opcodes.iter().any(|&o| o < 1 || o as usize > imap.len()) {
            return Err(ProblemError::Contract(format!("opcode out of range in {opcodes:?}")));
        }
        if imap.iter().any(|&i| i < 0 || i as usize >= self.pool.len()) {
            return Err(ProblemError::Contract(format!("pool index out of range in {imap:?}")));
        }
        Ok(())
    }

    pub fn describe(&self, opcodes: &[i64], imap: &[i64]) -> String {
        let mut s = String::from("x=v\n");
        for op in opcodes {
            s.push_str(&format!("x=f{op}(x)\n"));
        }
        for (i, &p) in imap.iter().enumerate() {
            s.push_str(&format!("f{}: {}\n", i + 1, self.pool[p as usize].name()));
        }
        s
    }
}

/// Total absolute deviation from the target program over all inputs.
pub fn eval_program(opcodes: &[i64], imap: &[i64], problem: &ProgramProblem) -> f64 {
    problem
        .inputs
        .iter()
        .map(|&v| {
            let got = run_program(opcodes, imap, &problem.pool, v, problem.clamp);
            let want = run_program(
                &problem.target_opcodes,
                &problem.target_imap,
                &problem.pool,
                v,
                problem.clamp,
            );
            (got - want).abs()
        })
        .sum()
}

impl OmnirepProblem for ProgramProblem {
    fn representation_template(&self) -> GenomeTemplate {
        GenomeTemplate::int_uniform(PROGRAM_LINES, 1, GENERIC_INSTRUCTIONS as i64)
    }

    fn encoding_template(&self) -> GenomeTemplate {
        GenomeTemplate::int_uniform(GENERIC_INSTRUCTIONS, 0, self.pool.len() as i64 - 1)
    }

    fn eval(&self, representation: &Genome, encoding: &Genome) -> Result<f64, ProblemError> {
        let opcodes = representation
            .as_ints()
            .ok_or_else(|| ProblemError::Contract("program must be an int vector".into()))?;
        let imap = encoding
            .as_ints()
            .ok_or_else(|| ProblemError::Contract("instruction map must be an int vector".into()))?;
        self.check(opcodes, imap)?;
        Ok(eval_program(opcodes, imap, self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStreams;

    fn idx(i: Instruction) -> i64 {
        Instruction::POOL.iter().position(|&p| p == i).unwrap() as i64
    }

    #[test]
    fn sample_program_trace() {
        use Instruction::*;
        let imap = [idx(Mul10), idx(Fabs), idx(Tan), idx(Mul10), idx(Minus2)];
        let ops = [1, 2, 3, 4, 2, 2, 5, 2, 1, 5];
        assert_eq!(run_program(&ops, &imap, &Instruction::POOL, 0.0, DEFAULT_CLAMP), 18.0);
    }

    #[test]
    fn identity_map_returns_input() {
        let imap = [idx(Instruction::Id); 5];
        for v in [-3.5, 0.0, 7.25] {
            assert_eq!(run_program(&[1, 2, 3, 4, 5, 1, 2, 3, 4, 5], &imap, &Instruction::POOL, v, 1e6), v);
        }
    }

    #[test]
    fn repeated_fabs() {
        let imap = [idx(Instruction::Id), idx(Instruction::Fabs), 0, 0, 0];
        assert_eq!(run_program(&[2; 10], &imap, &Instruction::POOL, -3.0, 1e6), 3.0);
    }

    #[test]
    fn outputs_are_totalized() {
        let imap = [idx(Instruction::Mul10), idx(Instruction::Tan), idx(Instruction::Square), 0, 0];
        for v in [-1e3, -1.5707963267948966, 0.3, 1e5] {
            for ops in [[1; 10], [2, 3, 2, 3, 2, 3, 2, 3, 2, 3], [3, 1, 3, 1, 3, 1, 3, 1, 3, 1]] {
                let y = run_program(&ops, &imap, &Instruction::POOL, v, 1e6);
                assert!(y.is_finite() && y.abs() <= 1e6);
            }
        }
    }

    #[test]
    fn program_error() {
        let mut rng = RngStreams::new(2).stream(0, 0);
        let p = ProgramProblem::generate(&mut rng, 10, 5.0);
        assert_eq!(eval_program(&p.target_opcodes, &p.target_imap, &p), 0.0);

        let id = idx(Instruction::Id);
        let single = ProgramProblem {
            pool: Instruction::POOL.to_vec(),
            target_opcodes: vec![1; 10],
            target_imap: vec![id, id, id, id, id],
            inputs: vec![4.0],
            clamp: 1e6,
        };
        // 4 -> 2 against a target of 4
        let cand_map = [id, idx(Instruction::Div2), id, id, id];
        let mut ops = vec![1; 10];
        ops[0] = 2;
        assert_eq!(eval_program(&ops, &cand_map, &single), 2.0);

        let mut reversed = p.clone();
        reversed.inputs.reverse();
        let ops = [1, 1, 2, 2, 3, 3, 4, 4, 5, 5];
        assert_eq!(
            eval_program(&ops, &p.target_imap, &p),
            eval_program(&ops, &p.target_imap, &reversed)
        );
    }

    #[test]
    fn eval_rejects_out_of_range_genomes() {
        let mut rng = RngStreams::new(2).stream(0, 0);
        let p = ProgramProblem::generate(&mut rng, 3, 5.0);
        let ops = Genome::int_vector(vec![6; 10], vec![(1, 6); 10]);
        let map = Genome::int_vector(vec![0; 5], vec![(0, 11); 5]);
        assert!(p.eval(&ops, &map).is_err());
    }
}
