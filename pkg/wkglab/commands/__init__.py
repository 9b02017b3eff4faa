from .simulate import simulate_bp
from .construct import construct_bp
from .verify import verify_bp
from .plotdata import plotdata_bp


def init_app(app):
    app.register_blueprint(simulate_bp)
    app.register_blueprint(construct_bp)
    app.register_blueprint(verify_bp)
    app.register_blueprint(plotdata_bp)
