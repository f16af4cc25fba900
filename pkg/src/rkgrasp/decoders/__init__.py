"""Problem decoders; ``make_decoder`` picks the right one for an instance."""
from rkgrasp.decoders.ncgpp import NcgppDecoder, NcgppInstance
from rkgrasp.decoders.ssp import SspDecoder, SspInstance, ktns_switches
from rkgrasp.decoders.stcp import StcpDecoder, StcpInstance
from rkgrasp.decoders.thlp import ThlpDecoder, ThlpInstance
from rkgrasp.decoders.tsp import TspDecoder, TspInstance

_DECODERS = {
    TspInstance: TspDecoder,
    ThlpInstance: ThlpDecoder,
    StcpInstance: StcpDecoder,
    NcgppInstance: NcgppDecoder,
    SspInstance: SspDecoder,
}

PROBLEMS = ("tsp", "thlp", "stcp", "ncgpp", "ssp")


def make_decoder(inst):
    return _DECODERS[type(inst)](inst)


__all__ = [
    "NcgppDecoder", "NcgppInstance", "SspDecoder", "SspInstance", "StcpDecoder",
    "StcpInstance", "ThlpDecoder", "ThlpInstance", "TspDecoder", "TspInstance",
    "ktns_switches", "make_decoder", "PROBLEMS",
]
