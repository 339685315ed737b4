"""Discrete-time simulator of a memristive spiking network trained by
self-competition, with an optional weight-sharing bank."""

from .codec import (BinaryImage, TimingConfig, encode, flip_noise, glyph_dataset,
                    parse_image, serialize_image)
from .device import MemristorParams, PhysicalParams
from .network import (NetworkConfig, Sharing, classify, evaluate, init_network,
                      present, train)
from .neuron import PspConfig

__version__ = "0.1.0"
