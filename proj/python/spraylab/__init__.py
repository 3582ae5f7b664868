"""Spray-and-wait DTN experiment toolkit with a random-forest node classifier."""

from spraylab._core import (  # noqa: F401
    ContactEvent,
    DeliveryRecord,
    FeatureVector,
    RandomForest,
    RunReports,
    SimConfig,
    compare,
    compute_features,
    compute_features_text,
    host_names,
    label_high_quality,
    load_settings,
    load_settings_file,
    parse_connectivity,
    parse_delivered,
    plot,
    predict,
    run,
    run_to_files,
    scenario_settings_text,
    simulate,
    train,
)

__version__ = "0.1.0"
