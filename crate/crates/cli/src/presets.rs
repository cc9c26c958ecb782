pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig4",
        summary: "RIS-Alamouti (N = 16, 32, 64) vs classical 2x1 Alamouti and the blind RIS-AP, BPSK",
        text: include_str!("../presets/fig4.toml"),
    },
    Preset {
        name: "fig5",
        summary: "RIS-IM VBLAST modes, detectors and phase resolutions vs classical VBLAST, 2x2 BPSK, Rayleigh",
        text: include_str!("../presets/fig5.toml"),
    },
    Preset {
        name: "fig6",
        summary: "RIS-IM VBLAST with a K = 5 dB Rician S-RIS and RIS-D channel, 2x2 BPSK",
        text: include_str!("../presets/fig6.toml"),
    },
    Preset {
        name: "smoke",
        summary: "one short curve per scheme, finishes in seconds",
        text: include_str!("../presets/smoke.toml"),
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
