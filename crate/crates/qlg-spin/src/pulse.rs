//! Timed pulse-sequence representation: RF tones, free-evolution delays,
//! and gradient switches, with a plain-text export for inspection and
//! regression snapshots.

use std::fmt::Write as _;

use crate::SpinError;

/// The two nuclei acting as qubit 1 and qubit 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Hydrogen,
    Carbon,
}

impl Spin {
    pub fn label(&self) -> &'static str {
        match self {
            Spin::Hydrogen => "H",
            Spin::Carbon => "C",
        }
    }
}

/// One RF tone: a resonant drive on a single spin with a fixed phase
/// (0 = +x, pi/2 = +y) and nutation rate `nu` in Hz; the rotation angle
/// accumulated over a duration `t` is `2 pi nu t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfTone {
    pub spin: Spin,
    pub phase: f64,
    pub nutation_hz: f64,
}

/// One entry of a pulse sequence. Events are strictly sequential; an
/// `Rf` event may carry several simultaneous tones as long as they
/// address distinct spins.
#[derive(Debug, Clone, PartialEq)]
pub enum PulseEvent {
    Rf { tones: Vec<RfTone>, duration: f64 },
    Delay { duration: f64 },
    Gradient { enabled: bool, strength: f64 },
}

impl PulseEvent {
    pub fn duration(&self) -> f64 {
        match self {
            PulseEvent::Rf { duration, .. } | PulseEvent::Delay { duration } => *duration,
            PulseEvent::Gradient { .. } => 0.0,
        }
    }

    fn validate(&self) -> Result<(), SpinError> {
        match self {
            PulseEvent::Rf { tones, duration } => {
                if *duration < 0.0 || !duration.is_finite() {
                    return Err(SpinError::InvalidPulse(format!(
                        "negative or non-finite duration {duration}"
                    )));
                }
                if tones.is_empty() {
                    return Err(SpinError::InvalidPulse("rf event with no tones".into()));
                }
                for tone in tones {
                    if tone.nutation_hz < 0.0 || !tone.nutation_hz.is_finite() {
                        return Err(SpinError::InvalidPulse(format!(
                            "invalid nutation rate {}",
                            tone.nutation_hz
                        )));
                    }
                }
                let mut seen_h = false;
                let mut seen_c = false;
                for tone in tones {
                    let seen = match tone.spin {
                        Spin::Hydrogen => &mut seen_h,
                        Spin::Carbon => &mut seen_c,
                    };
                    if *seen {
                        return Err(SpinError::OverlappingTones);
                    }
                    *seen = true;
                }
                Ok(())
            }
            PulseEvent::Delay { duration } => {
                if *duration < 0.0 || !duration.is_finite() {
                    Err(SpinError::InvalidPulse(format!(
                        "negative or non-finite delay {duration}"
                    )))
                } else {
                    Ok(())
                }
            }
            PulseEvent::Gradient { strength, .. } => {
                if strength.is_finite() {
                    Ok(())
                } else {
                    Err(SpinError::InvalidPulse("non-finite gradient".into()))
                }
            }
        }
    }
}

/// An ordered list of pulse events.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    events: Vec<PulseEvent>,
}

impl PulseSequence {
    pub fn new(events: Vec<PulseEvent>) -> Result<Self, SpinError> {
        for event in &events {
            event.validate()?;
        }
        Ok(Self { events })
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    /// Total wall time of the sequence.
    pub fn duration(&self) -> f64 {
        self.events.iter().map(PulseEvent::duration).sum()
    }

    /// Plain-text table, one event (one tone) per line:
    /// `kind spin phase_rad amplitude_hz duration_s`, with `-` for
    /// fields that do not apply.
    pub fn export_table(&self) -> String {
        let mut out = String::from("kind spin phase_rad amplitude_hz duration_s\n");
        for event in &self.events {
            match event {
                PulseEvent::Rf { tones, duration } => {
                    for tone in tones {
                        writeln!(
                            out,
                            "rf {} {:.9e} {:.9e} {:.9e}",
                            tone.spin.label(),
                            tone.phase,
                            tone.nutation_hz,
                            duration
                        )
                        .expect("writing to string cannot fail");
                    }
                }
                PulseEvent::Delay { duration } => {
                    writeln!(out, "delay - - - {duration:.9e}")
                        .expect("writing to string cannot fail");
                }
                PulseEvent::Gradient { enabled, strength } => {
                    let state = if *enabled { "on" } else { "off" };
                    writeln!(out, "gradient {state} - {strength:.9e} 0.0")
                        .expect("writing to string cannot fail");
                }
            }
        }
        out
    }
}
