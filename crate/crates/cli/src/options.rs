use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use capline::{load_lexicon, ExtractConfig, LexiconSet, VariantPolicy};
use clap::{Args, ValueEnum};

/// `--variant` values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    /// Lower variant, upper only when the lower finds nothing.
    Lower,
    /// Upper variant, lower only when the upper finds nothing.
    Upper,
    /// Run both and keep the result with more authors.
    #[default]
    Both,
}

impl From<Policy> for VariantPolicy {
    fn from(policy: Policy) -> Self {
        match policy {
            Policy::Lower => VariantPolicy::LowerThenUpper,
            Policy::Upper => VariantPolicy::UpperThenLower,
            Policy::Both => VariantPolicy::BestOfBoth,
        }
    }
}

/// Lexicon and matching flags shared by `extract`, `encode` and `evaluate`.
#[derive(Clone, Debug, Args)]
pub struct LexiconOptions {
    /// Adparticle list (one word per line) replacing the bundled one.
    #[arg(long, value_name = "PATH")]
    pub adparticles: Option<PathBuf>,
    /// Personal particle list replacing the bundled one.
    #[arg(long, value_name = "PATH")]
    pub particles: Option<PathBuf>,
    /// Prefix lexicon replacing the bundled one.
    #[arg(long, value_name = "PATH", conflicts_with = "no_prefixes")]
    pub prefixes: Option<PathBuf>,
    /// Disable prefix lowercasing.
    #[arg(long)]
    pub no_prefixes: bool,
    /// Address lines allowed between author blocks.
    #[arg(long, value_name = "N", default_value_t = capline::templates::DEFAULT_MAX_GAP_LINES)]
    pub max_gap_lines: usize,
    #[arg(long, value_enum, default_value_t = Policy::Both)]
    pub variant: Policy,
}

impl Default for LexiconOptions {
    fn default() -> Self {
        LexiconOptions {
            adparticles: None,
            particles: None,
            prefixes: None,
            no_prefixes: false,
            max_gap_lines: capline::templates::DEFAULT_MAX_GAP_LINES,
            variant: Policy::Both,
        }
    }
}

fn read_list(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_lexicon(&text).with_context(|| format!("parsing {}", path.display()))
}

impl LexiconOptions {
    /// Prefixes in file (rank) order.
    pub fn ranked_prefixes(&self) -> Result<Vec<String>> {
        if self.no_prefixes {
            return Ok(Vec::new());
        }
        match &self.prefixes {
            Some(path) => read_list(path),
            None => Ok(load_lexicon(LexiconSet::bundled_prefix_source())?),
        }
    }

    pub fn lexicons(&self) -> Result<LexiconSet> {
        let mut set = LexiconSet::bundled().with_prefix_list(self.ranked_prefixes()?);
        if let Some(path) = &self.adparticles {
            set = set.with_adparticles(read_list(path)?);
        }
        if let Some(path) = &self.particles {
            set = set.with_personal_particles(read_list(path)?);
        }
        Ok(set)
    }

    pub fn extract_config(&self) -> Result<ExtractConfig> {
        Ok(self.config_with(self.lexicons()?))
    }

    pub fn config_with(&self, lexicons: LexiconSet) -> ExtractConfig {
        let mut config = ExtractConfig::new(Arc::new(lexicons));
        config.max_gap_lines = self.max_gap_lines;
        config.variant_policy = self.variant.into();
        config
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[derive(Parser)]
    struct Wrapper {
        #[command(flatten)]
        options: LexiconOptions,
    }

    #[test]
    fn default_matches_command_line_defaults() {
        let parsed = Wrapper::parse_from(["capline"]).options;
        let default = LexiconOptions::default();
        assert_eq!(parsed.max_gap_lines, default.max_gap_lines);
        assert_eq!(parsed.variant, default.variant);
        assert_eq!(parsed.no_prefixes, default.no_prefixes);
    }
}
