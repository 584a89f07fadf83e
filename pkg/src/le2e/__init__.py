"""Lightweight end-to-end TTS: inference engine and numerical kernels.

A dependency-minimal (numpy-only) implementation of a non-autoregressive
acoustic model plus a multi-band GAN vocoder, the matching discriminator
forward passes, the complete loss suite as pure kernels, a portable binary
weight format, and a synthesis/benchmark CLI.
"""

from .acoustic import (ModelConfig, acoustic_forward, decode_durations,
                       embed_phonemes, length_regulate, pitch_forward,
                       predict_durations, transformer_stack_forward)
from .discriminators import (DiscriminatorOutput, MpdConfig, MrdConfig,
                             mpd_forward, mpd_reshape, mrd_forward)
from .errors import (ConfigError, DataError, FormatError, InputError,
                     Le2eError)
from .losses import (LossReport, LossWeights, PitchQuantizer, duration_loss,
                     feature_matching_loss, lsgan_d_loss, lsgan_g_loss,
                     mel_loss, mr_stft_full_sub, mr_stft_loss, pitch_ce_loss,
                     pitch_quantize, spectral_convergence, stft_loss,
                     stft_magnitude_loss, total_generator_loss)
from .numerics import (MelFilterbank, StftConfig, conv1d, conv_transpose1d,
                       conv2d, hann_window, layer_norm, leaky_relu, linear,
                       log_softmax, mel_filterbank, mel_spectrogram,
                       multi_head_self_attention, relu, sinusoidal_positions,
                       softmax, stft)
from .synthesis import (Synthesizer, init_random_discriminator_weights,
                        init_random_weights)
from .vocoder import (PqmfBank, VocoderConfig, pqmf_analysis, pqmf_design,
                      pqmf_synthesis, residual_stack_forward, vocoder_forward)
from .weights import (ParamCountReport, WeightBundle, count_parameters,
                      load_bundle, save_bundle)

__version__ = "0.1.0"
