//! Best-effort measurement-environment controls: scheduler priority and CPU
//! affinity. Children inherit both, so applying them once before a suite
//! covers every measured process. Unavailability (missing privileges,
//! unsupported platform) degrades with a reason — it never aborts, so suites
//! still run on unprivileged developer machines.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::measure::MeasurementProtocol;

/// Outcome of one requested control.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ControlStatus {
    NotRequested,
    Applied,
    Degraded(String),
}

/// What `apply_environment` managed to do.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvironmentReport {
    pub priority: ControlStatus,
    pub affinity: ControlStatus,
}

impl EnvironmentReport {
    /// One-line human summary, e.g. `priority: applied; affinity: degraded
    /// (Operation not permitted)` or `no controls requested`.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        match &self.priority {
            ControlStatus::NotRequested => {}
            ControlStatus::Applied => parts.push("priority: applied".to_string()),
            ControlStatus::Degraded(reason) => parts.push(format!("priority: degraded ({reason})")),
        }
        match &self.affinity {
            ControlStatus::NotRequested => {}
            ControlStatus::Applied => parts.push("affinity: applied".to_string()),
            ControlStatus::Degraded(reason) => parts.push(format!("affinity: degraded ({reason})")),
        }
        if parts.is_empty() {
            "no controls requested".to_string()
        } else {
            parts.join("; ")
        }
    }
}

/// Applies the protocol's priority/affinity requests to the current process.
/// Call it from the thread that will spawn the measured children so they
/// inherit the affinity mask.
pub fn apply_environment(protocol: &MeasurementProtocol) -> EnvironmentReport {
    let priority = if protocol.high_priority {
        raise_priority()
    } else {
        ControlStatus::NotRequested
    };
    let affinity = match &protocol.cpu_set {
        Some(cpus) => pin_to_cpus(cpus),
        None => ControlStatus::NotRequested,
    };
    EnvironmentReport { priority, affinity }
}

#[cfg(unix)]
fn raise_priority() -> ControlStatus {
    // -20 is the highest priority (lowest niceness) the kernel offers
    let rc = unsafe { libc::setpriority(libc::PRIO_PROCESS as _, 0, -20) };
    if rc == 0 {
        ControlStatus::Applied
    } else {
        ControlStatus::Degraded(std::io::Error::last_os_error().to_string())
    }
}

#[cfg(not(unix))]
fn raise_priority() -> ControlStatus {
    ControlStatus::Degraded("priority control is only implemented on unix".to_string())
}

#[cfg(target_os = "linux")]
fn pin_to_cpus(cpus: &BTreeSet<usize>) -> ControlStatus {
    if cpus.is_empty() {
        return ControlStatus::Degraded("cpu_set is empty".to_string());
    }
    let mut set: libc::cpu_set_t = unsafe { std::mem::zeroed() };
    for &cpu in cpus {
        if cpu >= libc::CPU_SETSIZE as usize {
            return ControlStatus::Degraded(format!(
                "cpu index {cpu} exceeds CPU_SETSIZE ({})",
                libc::CPU_SETSIZE
            ));
        }
        unsafe { libc::CPU_SET(cpu, &mut set) };
    }
    let rc = unsafe { libc::sched_setaffinity(0, std::mem::size_of::<libc::cpu_set_t>(), &set) };
    if rc == 0 {
        ControlStatus::Applied
    } else {
        ControlStatus::Degraded(std::io::Error::last_os_error().to_string())
    }
}

#[cfg(not(target_os = "linux"))]
fn pin_to_cpus(_cpus: &BTreeSet<usize>) -> ControlStatus {
    ControlStatus::Degraded("cpu affinity is only implemented on linux".to_string())
}
